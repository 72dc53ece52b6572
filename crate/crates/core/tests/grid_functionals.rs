use magpol_core::oned::{closed_form_minimizer, sech_profile, OneDProblem};
use magpol_core::{density_fourier, kinetic, mass, quartic, DensityProfile, Error, Field1D, Grid1D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn grid() -> Grid1D {
    Grid1D::new(4096, 40.0).unwrap()
}

fn sech(a: f64, b: f64, g: Grid1D) -> Field1D {
    Field1D::from_fn(g, |t| sech_profile(a, b, t)).unwrap()
}

#[test]
fn grid_validation() {
    assert!(Grid1D::new(100, 10.0).is_err());
    assert!(Grid1D::new(32, 10.0).is_err());
    assert!(Grid1D::new(128, 0.0).is_err());
    let g = Grid1D::new(128, 8.0).unwrap();
    assert_eq!(g.point(0), -8.0);
    assert!((g.spacing() - 0.125).abs() < 1e-15);
    assert!((g.dual_spacing() - PI / 8.0).abs() < 1e-15);
}

#[test]
fn field_validation() {
    let g = Grid1D::new(64, 5.0).unwrap();
    let mut v = vec![0.0; 64];
    v[3] = f64::NAN;
    assert!(matches!(Field1D::new(g, v), Err(Error::InvalidField(_))));
    assert!(Field1D::new(g, vec![0.0; 10]).is_err());
    let wide = Field1D::from_fn(g, |t| (-t * t / 20.0).exp()).unwrap();
    assert!(matches!(kinetic(&wide), Err(Error::DomainTooSmall(_))));
    assert!(DensityProfile::new(g, vec![-1.0; 64]).is_err());
}

#[test]
fn functional_examples() {
    let f11 = sech(1.0, 1.0, grid());
    let f23 = sech(2.0, 3.0, grid());
    let f12 = sech(1.0, 2.0, grid());
    let z = Field1D::zeros(grid());
    assert!((mass(&f11) - 1.0).abs() < 1e-10);
    assert!((mass(&f23) - 2.0).abs() < 1e-10);
    assert_eq!(mass(&z), 0.0);
    assert!((kinetic(&f11).unwrap() - 1.0 / 12.0).abs() < 1e-8);
    assert!((kinetic(&f23).unwrap() - 6.0).abs() < 1e-6);
    assert_eq!(kinetic(&z).unwrap(), 0.0);
    assert!((quartic(&f11) - 1.0 / 6.0).abs() < 1e-8);
    assert!((quartic(&f12) - 1.0 / 3.0).abs() < 1e-8);
    assert_eq!(quartic(&z), 0.0);
}

#[test]
fn closed_form_minimizer_examples() {
    let f = closed_form_minimizer(&OneDProblem::new(1.0, 1.0).unwrap(), &grid()).unwrap();
    assert_eq!(f.values()[2048], 0.5);
    let f = closed_form_minimizer(&OneDProblem::new(2.0, 3.0).unwrap(), &grid()).unwrap();
    assert!((mass(&f) - 2.0).abs() < 1e-9);
    assert!(closed_form_minimizer(&OneDProblem::new(1.0, 0.5).unwrap(), &grid()).is_err());
    assert!(sech_profile(1.0, 1e-12, 0.0) < 1e-6);
}

#[test]
fn translation_invariance() {
    let f = sech(1.0, 1.0, grid());
    for s in [1, 17, 50, 4079] {
        let r = f.rotated(s);
        assert!((mass(&r) - mass(&f)).abs() < 1e-10 * mass(&f));
        assert!((kinetic(&r).unwrap() - kinetic(&f).unwrap()).abs() < 1e-10 * kinetic(&f).unwrap());
        assert!((quartic(&r) - quartic(&f)).abs() < 1e-10 * quartic(&f));
    }
}

#[test]
fn refinement_is_spectrally_converged() {
    let coarse = sech(1.0, 1.0, grid());
    let fine = sech(1.0, 1.0, Grid1D::new(8192, 40.0).unwrap());
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    assert!(rel(mass(&coarse), mass(&fine)) < 1e-10);
    assert!(rel(kinetic(&coarse).unwrap(), kinetic(&fine).unwrap()) < 1e-10);
    assert!(rel(quartic(&coarse), quartic(&fine)) < 1e-10);
}

#[test]
fn fourier_zero_mode_and_gaussian() {
    let f = sech(1.0, 1.0, grid());
    let s = density_fourier(&DensityProfile::from_field(&f));
    assert!((s.values()[0].re - 1.0).abs() < 1e-12 && s.values()[0].im.abs() < 1e-14);

    let g = grid();
    let rho = DensityProfile::new(g, g.points().iter().map(|t| (-t * t).exp() / PI.sqrt()).collect()).unwrap();
    let s = density_fourier(&rho);
    for m in [0, 1, 5, 20, 4090] {
        let k = s.wavenumber(m);
        assert!((s.values()[m] - (-k * k / 4.0).exp()).norm() < 1e-12, "m={m}");
    }
    assert!((rho.fourier_at(1.3).re - (-1.69f64 / 4.0).exp()).abs() < 1e-12);
}

#[test]
fn parseval_on_random_densities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = Grid1D::new(1024, 30.0).unwrap();
    for _ in 0..20 {
        let bumps: Vec<(f64, f64, f64)> =
            (0..4).map(|_| (rng.gen_range(0.1..2.0), rng.gen_range(-8.0..8.0), rng.gen_range(0.3..2.0))).collect();
        let rho = DensityProfile::new(
            g,
            g.points().iter().map(|&t| bumps.iter().map(|(c, x, w)| c * (-((t - x) / w).powi(2)).exp()).sum()).collect(),
        )
        .unwrap();
        let s = density_fourier(&rho);
        let lhs: f64 = s.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * s.dual_spacing();
        let rhs = 2.0 * PI * g.spacing() * rho.values().iter().map(|r| r * r).sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }
}
