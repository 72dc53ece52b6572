use magpol_core::landau::*;
use magpol_core::quad::{adaptive_to_infinity, GaussRule};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `∫_{ℝ²} p(u) (|u|² + z²)^{-1/2} du` with `p` the density of the difference
/// of two independent transverse Landau positions, in polar coordinates.
fn veff_plane_oracle(z: f64, b: f64) -> f64 {
    let theta = GaussRule::new(8, 0.0, 2.0 * PI);
    theta.integrate(|_| {
        adaptive_to_infinity(
            |r| b / (4.0 * PI) * (-b * r * r / 4.0).exp() * r / (r * r + z * z).sqrt(),
            0.0,
            1e-16,
            1e-13,
        )
        .unwrap()
        .value
    })
}

#[test]
fn effective_potential_matches_plane_quadrature() {
    for b in [1.0, 100.0] {
        for z in [0.0, 0.1, 1.0, 10.0] {
            let oracle = veff_plane_oracle(z, b);
            assert!(rel(effective_potential(z, b), oracle) < 1e-7, "z={z} B={b}");
        }
    }
    assert!((effective_potential(0.0, 1.0) - PI.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn effective_potential_shape() {
    assert!((50.0 * effective_potential(50.0, 1.0) - 1.0).abs() < 1e-3);
    let (z, b) = (0.3, 100.0);
    assert!(rel(effective_potential(z, b), b.sqrt() * effective_potential(b.sqrt() * z, 1.0)) < 1e-12);
    let mut prev = f64::INFINITY;
    for i in 0..200 {
        let z = 0.05 * i as f64;
        let v = effective_potential(z, 3.0);
        assert!(v > 0.0 && v < prev);
        assert_eq!(v, effective_potential(-z, 3.0));
        if z > 0.0 {
            assert!(v <= 1.0 / z);
        }
        prev = v;
    }
}

#[test]
fn fourier_kernel_matches_radial_oracle() {
    for (k, b) in [(1.0, 1.0), (0.01, 1.0), (3.0, 4.0), (40.0, 100.0)] {
        let oracle = 2.0
            * PI
            * adaptive_to_infinity(|q| (-q * q / b).exp() * q / (q * q + k * k), 0.0, 1e-16, 1e-13)
                .unwrap()
                .value;
        assert!(rel(effective_potential_fourier(k, b), oracle) < 1e-10, "k={k}");
    }
    assert!(rel(effective_potential_fourier(1.0, 1.0), PI * 0.596_347_362_323_194_1) < 1e-13);
    let k: f64 = 1e-6;
    let small = PI * ((1.0 / (k * k)).ln() - magpol_core::special::EULER_GAMMA);
    assert!(rel(effective_potential_fourier(k, 1.0), small) < 1e-10);
    assert!(effective_potential_fourier(1e-200, 1.0).is_finite());
}

#[test]
fn projector_kernel_basic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    assert!((p0_kernel([0.3, -1.2], [0.3, -1.2], 2.5).re - 2.5 / (2.0 * PI)).abs() < 1e-15);
    for _ in 0..10 {
        let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        assert!((p0_kernel(x, y, 1.0) - p0_kernel(y, x, 1.0).conj()).norm() < 1e-15);
    }
}

#[test]
fn projector_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let x = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
        let y = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
        assert!(p0_idempotency_residual(1.0, x, y).unwrap() < 1e-8);
    }
}

#[test]
fn projected_phase_identity() {
    assert_eq!(projected_phase_factor([0.0, 0.0], 3.0), 1.0);
    assert!((projected_phase_factor([2f64.sqrt(), 0.0], 1.0) - (-1f64).exp()).abs() < 1e-15);
    for (k, b, z, y) in [([0.7, -0.4], 1.3, [0.3, -0.2], [-0.5, 0.4]), ([1.5, 0.5], 1.0, [0.0, 0.8], [0.6, -0.3])] {
        assert!(phase_identity_residual(k, b, z, y).unwrap() < 1e-8);
    }
    // (g_B, e^{ik·x} g_B) at B = 4, k = (1,1)
    let g = TransverseGaussian::new(4.0).unwrap();
    let (v, _) = plane_integral(
        |x| Complex64::from_polar(g.value(x).powi(2), x[0] + x[1]),
        6.0,
        1e-13,
    )
    .unwrap();
    assert!((v.re - (-0.25f64).exp()).abs() < 1e-8 && v.im.abs() < 1e-8);
}

#[test]
fn first_excited_state_is_orthogonal_to_lowest_level() {
    let b = 1.0;
    for x in [[0.0, 0.0], [0.7, -0.3], [-1.1, 0.4]] {
        let (v, _) = plane_integral(
            |y| p0_kernel(x, y, b) * first_excited_radial(b, (y[0] * y[0] + y[1] * y[1]).sqrt()),
            13.0,
            1e-12,
        )
        .unwrap();
        assert!(v.norm() < 1e-8, "{v}");
    }
}

#[test]
fn ik_norm_bound_holds() {
    let g = LowestLevelState::ground(1.0).unwrap();
    let c = i_kperp_norm_bound_check([0.0, 0.0], 1.0, std::slice::from_ref(&g)).unwrap();
    assert!((c[0].ratio - 1.0).abs() < 1e-8 && c[0].passed);
    let c = i_kperp_norm_bound_check([1.0, 0.0], 1.0, std::slice::from_ref(&g)).unwrap();
    assert!(c[0].passed && c[0].margin > 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let states: Vec<_> = (0..5)
        .map(|_| {
            let centers = (0..3).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
            let coefs = (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            LowestLevelState::new(1.0, centers, coefs).unwrap()
        })
        .collect();
    for c in i_kperp_norm_bound_check([3.0, 0.0], 1.0, &states).unwrap() {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn general_kernel_reproduces_closed_form() {
    let rho = RadialTransverseDensity::ground(1.0).unwrap();
    let kernel = TransverseKernel::new(&rho, 0.05).unwrap();
    for z in [0.0, 0.05, 0.3, 1.0, 4.0, 20.0] {
        assert!(rel(kernel.value(z), effective_potential(z, 1.0)) < 1e-6, "z={z}");
        assert_eq!(kernel.value(z), kernel.value(-z));
    }
    let ek = EffectiveKernel { b: 1.0 };
    for n in [1, 3, 5] {
        assert!(rel(kernel.derivative_at_origin(n), ek.derivative_at_origin(n)) < 1e-8, "n={n}");
    }
    let far = RadialTransverseDensity::ground(1e6).unwrap();
    assert!((effective_potential_general(&far, 1.0).unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(transverse_kinetic(1e6), 1e6);
}

#[test]
fn mixture_densities_are_normalized() {
    for (c0, c1) in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8)] {
        let m = RadialTransverseDensity::mixture(2.0, c0, c1).unwrap();
        assert!((m.normalization() - 1.0).abs() < 1e-12);
    }
}
