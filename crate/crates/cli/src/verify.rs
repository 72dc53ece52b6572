//! Invariant suite behind `magpol verify`.

use crate::error::{CliError, CliResult};
use magpol_core::certificate::{certify_p0, default_cutoff_k};
use magpol_core::coulomb::{coulomb_d_product, coulomb_d_real_space, decompose, offdiag_bound_check};
use magpol_core::landau::{p0_idempotency_residual, phase_identity_residual, EffectiveKernel};
use magpol_core::oned::*;
use magpol_core::pekar::{coherent_infimum, pekar_energy, pekar_minimize, trial_energy, GridPolicy, PekarProductState, PhysParams};
use magpol_core::{kinetic, DensityProfile, Field1D, Grid1D, Result};
use std::io::Write;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn sech_field(a: f64, b: f64, n: usize, t: f64) -> Result<Field1D> {
    closed_form_minimizer(&OneDProblem::new(a, b)?, &Grid1D::new(n, t)?)
}

pub fn run_suite() -> Vec<Check> {
    let g = || Grid1D::new(4096, 40.0);
    vec![
        check("oned closed form", || {
            let s = solve_numeric(&OneDProblem::new(1.0, 1.0)?, &g()?, 1e-8)?;
            let d = distance_to_orbit(&s.minimizer, |t| sech_profile(1.0, 1.0, t));
            let err = (s.energy + 1.0 / 12.0).abs();
            Ok((err < 1e-6 && d < 1e-4, format!("energy error {err:.2e}, orbit distance {d:.2e}")))
        }),
        check("oned scaling family", || {
            let mut worst: f64 = 0.0;
            for (a, b) in [(2.0, 1.0), (1.0, 3.0), (0.5, 2.0), (1.0, 10.0)] {
                let p = OneDProblem::new(a, b)?;
                worst = worst.max(rel(solve_numeric(&p, &g()?, 1e-8)?.energy, closed_form_energy(&p)));
            }
            Ok((worst <= 1e-5, format!("worst relative error {worst:.2e}")))
        }),
        check("sharp inequality", || {
            let sharp = 3f64.powf(0.125);
            let gr = Grid1D::new(1024, 30.0)?;
            let mut worst_ratio = f64::INFINITY;
            let mut worst_gap = f64::INFINITY;
            for i in 0..20 {
                let s = i as f64;
                let f = Field1D::from_fn(gr, |t| {
                    (-((t - s.sin() * 3.0) / (0.4 + 0.1 * s)).powi(2)).exp()
                        + (0.5 + (1.7 * s).cos()) * (-((t + 2.0) / 1.5).powi(2)).exp()
                })?;
                worst_ratio = worst_ratio.min(gn_ratio(&f)? - sharp);
                worst_gap = worst_gap.min(gn_energy_gap(&f, 2.5 * s)?);
            }
            let at_extremal = (gn_ratio(&sech_field(1.0, 1.0, 4096, 40.0)?)? - sharp).abs();
            Ok((
                at_extremal < 1e-6 && worst_ratio >= -1e-9 && worst_gap >= -1e-6,
                format!("extremal {at_extremal:.2e}, min ratio excess {worst_ratio:.2e}, min gap {worst_gap:.2e}"),
            ))
        }),
        check("coulomb dual path", || {
            let mut worst: f64 = 0.0;
            for (f, b) in [(sech_field(1.0, 1.0, 4096, 40.0)?, 1.0), (sech_field(1.0, 1.0, 4096, 40.0)?, 100.0), (sech_field(2.0, 3.0, 4096, 20.0)?, 10.0)] {
                let s = coulomb_d_product(&f, b)?;
                let r = coulomb_d_real_space(&DensityProfile::from_field(&f), &EffectiveKernel { b })?;
                worst = worst.max(rel(s, r));
            }
            Ok((worst < 1e-7, format!("worst relative difference {worst:.2e}")))
        }),
        check("projector identities", || {
            let r1 = p0_idempotency_residual(1.0, [0.3, -0.7], [-0.4, 0.5])?;
            let r2 = phase_identity_residual([0.7, -0.4], 1.3, [0.3, -0.2], [-0.5, 0.4])?;
            Ok((r1 < 1e-8 && r2 < 1e-8, format!("idempotency {r1:.2e}, phase {r2:.2e}")))
        }),
        check("off-diagonal inequality", || {
            let f = sech_field(1.0, 1.0, 2048, 40.0)?;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let c = offdiag_bound_check(0.5, s, s, &f, 1.0)?;
            Ok((c.passed, format!("margin {:.3e}", c.margin)))
        }),
        check("trial state and upper bound", || {
            let p = PhysParams::new(10f64.exp(), 1.0)?;
            let gr = GridPolicy::default().grid(&p)?;
            let t = trial_energy(p.b(), 1.0, &gr)?;
            let (_, m) = pekar_minimize(&p, &gr, 1e-10)?;
            let kin_err = (t.longitudinal_kinetic - 100.0 / 48.0).abs();
            Ok((
                kin_err < 1e-10 && t.transverse == p.b() && m.total <= t.total,
                format!("kinetic error {kin_err:.2e}, minimum {:.6} vs trial {:.6} (binding)", m.binding, t.binding),
            ))
        }),
        check("coherent infimum", || {
            let p = PhysParams::new(8f64.exp(), 1.0)?;
            let gr = GridPolicy::default().grid(&p)?;
            let s = PekarProductState::new(p, sech_field(1.0, 3.0, gr.n(), gr.half_width())?)?;
            let e = pekar_energy(&s)?;
            let c = coherent_infimum(&s)?;
            let r = rel(c - p.b(), e.binding);
            Ok((r < 1e-8, format!("relative difference {r:.2e}")))
        }),
        check("decomposition ledger", || {
            let b = 6f64.exp();
            let l = decompose(&sech_field(1.0, 3.0, 8192, 40.0)?, b)?;
            Ok((
                l.closure_defect() <= l.quadrature_error_estimate && l.r1_within_bound(),
                format!("|R1| = {:.3e} vs bound {:.3e}", l.r1.abs(), l.r1_bound),
            ))
        }),
        check("certificate ledger", || {
            let b = 12f64.exp();
            let c = certify_p0(b, 1.0, default_cutoff_k(b), None, &g()?, 1e-9)?;
            let exact = c.recompute_p0().to_bits() == c.p0_bound.to_bits();
            Ok((
                c.validity.valid && exact && c.i_value >= c.i_envelope && c.p0_bound < b,
                format!("p0 = B - {:.3}, I = {:.4} >= {:.4}", b - c.p0_bound, c.i_value, c.i_envelope),
            ))
        }),
        check("kinetic guard", || {
            let wide = Field1D::from_fn(Grid1D::new(64, 5.0)?, |t| (-t * t / 20.0).exp())?;
            Ok((kinetic(&wide).is_err(), "domain-too-small detected".into()))
        }),
    ]
}

pub fn cmd_verify(out: &mut dyn Write) -> CliResult<()> {
    let checks = run_suite();
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Invariant(format!("{failed} of {} checks failed", checks.len())));
    }
    Ok(())
}
