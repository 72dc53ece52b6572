use magpol_core::oned::*;
use magpol_core::pekar::*;
use magpol_core::{quartic, Grid1D};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn trial_state_energies() {
    for x in [6.0f64, 10.0, 12.0] {
        let b = x.exp();
        let p = PhysParams::new(b, 1.0).unwrap();
        let g = GridPolicy::default().grid(&p).unwrap();
        let s = trial_state(b, 1.0, &g).unwrap();
        assert!((magpol_core::mass(s.f()) - 1.0).abs() < 1e-10);
        let e = trial_energy(b, 1.0, &g).unwrap();
        assert_eq!(e.transverse, b);
        assert!((e.longitudinal_kinetic - x * x / 48.0).abs() < 1e-10, "{}", e.longitudinal_kinetic - x * x / 48.0);
        assert!((quartic(s.f()) - x / 12.0).abs() < 1e-10);
        assert!(e.total < b);
    }
}

#[test]
fn minimizer_beats_trial_state() {
    for x in [10.0f64, 14.0, 18.0] {
        let p = PhysParams::new(x.exp(), 1.0).unwrap();
        let g = GridPolicy::default().grid(&p).unwrap();
        let (_, e) = pekar_minimize(&p, &g, 1e-10).unwrap();
        let trial = trial_energy(p.b(), 1.0, &g).unwrap();
        assert!(e.binding <= trial.binding);
        assert!(e.total <= trial.total);
    }
}

#[test]
fn coherent_infimum_matches_pekar_energy() {
    for (x, alpha, bb) in [(6.0f64, 1.0, 1.0), (6.0, 1.0, 3.0), (10.0, 1.0, 5.0), (8.0, 2.0, 4.0), (12.0, 0.5, 2.0)] {
        let b = x.exp();
        let g = Grid1D::new(8192, 40.0).unwrap();
        let f = closed_form_minimizer(&OneDProblem::new(1.0, bb).unwrap(), &g).unwrap();
        let s = PekarProductState::new(PhysParams::new(b, alpha).unwrap(), f).unwrap();
        let e = pekar_energy(&s).unwrap();
        let c = coherent_infimum(&s).unwrap();
        assert!(rel(c - b, e.binding) < 1e-8);
        assert!(coherent_energy(&s, 0.0).unwrap() >= c);
        assert!(coherent_energy(&s, 1.1).unwrap() >= c);
    }
}

#[test]
fn scaling_identity() {
    for (x, alpha, bb) in [(8.0f64, 2.0, 2.0), (6.0, 0.5, 1.0), (10.0, 1.0, 3.0)] {
        let g = Grid1D::new(8192, 40.0).unwrap();
        let f = closed_form_minimizer(&OneDProblem::new(1.0, bb).unwrap(), &g).unwrap();
        let c = scaling_identity_check(x.exp(), alpha, &f).unwrap();
        assert!(c.passed);
    }
}

#[test]
fn sweep_and_fit() {
    let bs: Vec<f64> = (5..=15).map(|i| (2.0 * i as f64).exp()).collect();
    let pts = sweep(&bs, 1.0, &GridPolicy::default(), 1e-10).unwrap();
    let ratios: Vec<f64> = pts.iter().map(|p| -p.minimum.binding / p.b.ln().powi(2)).collect();
    assert!(ratios.iter().all(|&r| r > 0.0 && r <= 1.05 / 48.0), "{ratios:?}");
    // The ratio dips before rising; monotone only from X = 22 on.
    assert!(ratios[6..].windows(2).all(|w| w[1] >= w[0]), "{ratios:?}");
    assert!(pts.iter().all(|p| p.minimum.total <= p.trial.total));
    let data: Vec<(f64, f64)> = pts.iter().map(|p| (p.b, p.minimum.binding)).collect();
    let fit = fit_asymptotics(&data).unwrap();
    assert!(rel(fit.c2, 1.0 / 48.0) < 0.25);
    assert!(fit.c3 > 0.0);
}

#[test]
fn synthetic_fit_recovery() {
    let data: Vec<(f64, f64)> = (5..=15)
        .map(|i| {
            let x = 2.0 * i as f64;
            (x.exp(), -x * x / 48.0 + x * x.ln() / 12.0 + 0.3 * x)
        })
        .collect();
    let fit = fit_asymptotics(&data).unwrap();
    assert!((fit.c2 - 1.0 / 48.0).abs() < 1e-9);
    assert!((fit.c3 - 1.0 / 12.0).abs() < 1e-9);
    assert!((fit.c4 - 0.3).abs() < 1e-9);
    assert!(fit_asymptotics(&data[..3]).is_err());
}
