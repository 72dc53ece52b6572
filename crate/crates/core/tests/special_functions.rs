use magpol_core::quad::adaptive_to_infinity;
use magpol_core::special::{e1, erfcx, exp_e1, expint_n_complex, sech_power_integral};
use num_complex::Complex64;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sample_points() -> Vec<f64> {
    (0..20).map(|i| 1e-3 * 1.8f64.powi(i)).collect()
}

#[test]
fn erfcx_matches_quadrature_oracle_at_twenty_points() {
    for x in sample_points() {
        let oracle = adaptive_to_infinity(|t| (-t * t - 2.0 * x * t).exp(), 0.0, 1e-17, 1e-14)
            .unwrap()
            .value
            * 2.0
            / PI.sqrt();
        assert!(rel(erfcx(x), oracle) < 1e-12, "x={x}: {} vs {oracle}", erfcx(x));
    }
}

#[test]
fn erfcx_frozen_values() {
    let cases = [
        (0.0, 1.0),
        (0.3, 0.734_599_334_567_655_2),
        (1.0, 0.427_583_576_155_807),
        (2.5, 0.210_806_364_061_143_6),
        (7.9, 0.070_857_477_367_396_99),
        (8.1, 0.069_133_920_177_343_51),
        (30.0, 0.018_795_888_861_416_75),
        (-1.5, 18.653_886_256_262_734),
    ];
    for (x, want) in cases {
        assert!(rel(erfcx(x), want) < 1e-13, "x={x}");
    }
}

#[test]
fn scaled_e1_matches_quadrature_oracle_at_twenty_points() {
    for x in sample_points() {
        let oracle = adaptive_to_infinity(|t| (-t).exp() / (x + t), 0.0, 1e-17, 1e-14)
            .unwrap()
            .value;
        assert!(rel(exp_e1(x), oracle) < 1e-12, "x={x}: {} vs {oracle}", exp_e1(x));
    }
}

#[test]
fn e1_frozen_values() {
    let cases = [
        (1e-8, 17.843_465_089_050_83, 17.843_465_267_485_48),
        (0.5, 0.559_773_594_776_160_8, 0.922_910_632_483_730_5),
        (1.0, 0.219_383_934_395_520_27, 0.596_347_362_323_194_1),
        (1.5, 0.100_019_582_406_632_65, 0.448_256_669_291_583),
        (20.0, 9.835_525_290_649_882e-11, 0.047_718_545_495_960_84),
        (1e4, 0.0, 9.999_000_199_940_024e-5),
    ];
    for (x, want_e1, want_scaled) in cases {
        if want_e1 > 0.0 {
            assert!(rel(e1(x), want_e1) < 1e-13, "E1({x})");
        }
        assert!(rel(exp_e1(x), want_scaled) < 1e-13, "exp E1({x})");
    }
    assert!(e1(0.0).is_infinite());
}

#[test]
#[allow(clippy::approx_constant)]
fn complex_expint_frozen_values() {
    let cases = [
        (1, Complex64::new(0.0, 3.0), Complex64::new(-0.119_629_786_008_000_33, 0.277_856_201_204_571_6)),
        (3, Complex64::new(0.0, -3.14159), Complex64::new(-0.136_464_039_655_924_46, -0.183_422_147_614_917_86)),
        (5, Complex64::new(0.0, -20.0), Complex64::new(-0.037_977_992_462_123_33, 0.029_436_642_158_297_75)),
        (3, Complex64::new(2.0, 1.0), Complex64::new(0.009_506_890_417_283_61, -0.027_538_794_357_954_92)),
    ];
    for (n, z, want) in cases {
        let got = expint_n_complex(n, z);
        assert!((got - want).norm() < 1e-13 * want.norm(), "E_{n}({z}) = {got}");
    }
}

#[test]
fn sech_power_integrals() {
    assert!((sech_power_integral(2.0) - 2.0).abs() < 1e-13);
    assert!((sech_power_integral(4.0) - 4.0 / 3.0).abs() < 1e-13);
    assert!((sech_power_integral(1.0) - PI).abs() < 1e-13);
}
