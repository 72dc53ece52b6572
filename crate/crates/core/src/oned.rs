//! The effective one-dimensional polaron problem
//! `inf { ∫|f'|² - b∫f⁴ : ∫f² = a }`, its sech extremizer, the sharp
//! Gagliardo–Nirenberg ratio, and a Fourier-weighted generalization.

use crate::error::{ensure, positive, Error, Result};
use crate::flow::{self, FlowSettings, Local, Multiplier};
use crate::grid::{kinetic, lq_power, mass, quartic, Field1D, Grid1D, Spectral};
use crate::special::sech_power_integral;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Mass `a > 0` and coupling `b ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneDProblem {
    mass_a: f64,
    coupling_b: f64,
}

impl OneDProblem {
    pub fn new(mass_a: f64, coupling_b: f64) -> Result<Self> {
        positive("mass a", mass_a)?;
        ensure(coupling_b.is_finite() && coupling_b >= 0.0, || {
            Error::InvalidParameter(format!("coupling b must be finite and >= 0, got {coupling_b}"))
        })?;
        Ok(Self { mass_a, coupling_b })
    }

    pub fn mass_a(&self) -> f64 {
        self.mass_a
    }

    pub fn coupling_b(&self) -> f64 {
        self.coupling_b
    }
}

/// Output of a numerical minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneDSolution {
    pub energy: f64,
    pub minimizer: Field1D,
    pub iterations: usize,
    pub gradient_residual: f64,
    /// Zero coupling: the infimum 0 is not attained and `minimizer` is the zero field.
    pub degenerate: bool,
}

/// `f_{a,b}(t) = (a√b/2) sech(abt/2)`.
pub fn sech_profile(a: f64, b: f64, t: f64) -> f64 {
    let x = (0.5 * a * b * t).abs();
    let e = (-x).exp();
    0.5 * a * b.sqrt() * 2.0 * e / (1.0 + e * e)
}

/// Samples of the exact minimizer `f_{a,b}`.
pub fn closed_form_minimizer(p: &OneDProblem, g: &Grid1D) -> Result<Field1D> {
    let (a, b) = (p.mass_a, p.coupling_b);
    ensure(g.half_width() * a * b >= 40.0, || {
        Error::DomainTooSmall(format!(
            "T·a·b = {} < 40; the sech profile does not decay inside the box",
            g.half_width() * a * b
        ))
    })?;
    Field1D::from_fn(*g, |t| sech_profile(a, b, t))
}

/// `-b²a³/12`.
pub fn closed_form_energy(p: &OneDProblem) -> f64 {
    -p.coupling_b.powi(2) * p.mass_a.powi(3) / 12.0
}

/// Sharp constant of `‖g'‖^θ ‖g‖^{1-θ} ≥ C_q ‖g‖_q`, `θ = 1/2 - 1/q`, from the
/// extremal `sech^{2/(q-2)}`.
pub fn sharp_gn_constant(q: f64) -> f64 {
    assert!(q > 2.0, "the interpolation inequality needs q > 2");
    let s = 2.0 / (q - 2.0);
    let theta = 0.5 - 1.0 / q;
    let norm2 = sech_power_integral(2.0 * s);
    let grad2 = s * s * norm2 / (2.0 * s + 1.0);
    let lq = sech_power_integral(q * s);
    grad2.powf(theta / 2.0) * norm2.powf((1.0 - theta) / 2.0) / lq.powf(1.0 / q)
}

/// `‖f'‖^{1/4}‖f‖^{3/4}/‖f‖₄`.
pub fn gn_ratio(f: &Field1D) -> Result<f64> {
    let q4 = quartic(f);
    ensure(q4 > 0.0, || Error::InvalidField("the ratio is undefined for the zero field".into()))?;
    let kin = kinetic(f)?;
    Ok(kin.powf(0.125) * mass(f).powf(0.375) / q4.powf(0.25))
}

/// Same ratio for general `q > 2`.
pub fn gn_ratio_q(f: &Field1D, q: f64) -> Result<f64> {
    let lq = lq_power(f, q);
    ensure(lq > 0.0, || Error::InvalidField("the ratio is undefined for the zero field".into()))?;
    let theta = 0.5 - 1.0 / q;
    Ok(kinetic(f)?.powf(theta / 2.0) * mass(f).powf((1.0 - theta) / 2.0) / lq.powf(1.0 / q))
}

/// `∫|f'|² - b∫f⁴ + (b²/12)(∫f²)³`, nonnegative up to grid error.
pub fn gn_energy_gap(f: &Field1D, b: f64) -> Result<f64> {
    Ok(kinetic(f)? - b * quartic(f) + b * b / 12.0 * mass(f).powi(3))
}

/// L² distance between `f` and the centered profile `reference`, minimized over translations of `f`.
pub fn distance_to_orbit(f: &Field1D, reference: impl Fn(f64) -> f64) -> f64 {
    let g = *f.grid();
    let spec = Spectral::new(g);
    let r: Vec<f64> = g.points().into_iter().map(&reference).collect();
    let dist = |s: f64| {
        let v = spec.translate(f.values(), s);
        (g.spacing() * v.iter().zip(&r).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).sqrt()
    };
    let c = -f.centroid();
    let h = g.spacing();
    // Golden-section refinement around the centroid alignment.
    let (mut lo, mut hi) = (c - h, c + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut d1, mut d2) = (dist(x1), dist(x2));
    for _ in 0..60 {
        if d1 < d2 {
            hi = x2;
            x2 = x1;
            d2 = d1;
            x1 = hi - phi * (hi - lo);
            d1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            d1 = d2;
            x2 = lo + phi * (hi - lo);
            d2 = dist(x2);
        }
    }
    d1.min(d2).min(dist(c))
}

fn gaussian_guess(g: &Grid1D, width: f64) -> Vec<f64> {
    g.points().into_iter().map(|t| (-0.5 * (t / width).powi(2)).exp()).collect()
}

fn degenerate_solution(g: &Grid1D) -> OneDSolution {
    OneDSolution {
        energy: 0.0,
        minimizer: Field1D::zeros(*g),
        iterations: 0,
        gradient_residual: 0.0,
        degenerate: true,
    }
}

fn check_tol(tol: f64) -> Result<()> {
    ensure(tol.is_finite() && tol > 0.0, || {
        Error::InvalidParameter(format!("tolerance must be finite and > 0, got {tol}"))
    })
}

/// Undo the working-unit substitution `f(t) = √μ g(μt)`.
fn unscale(g: &Grid1D, mu: f64, values: Vec<f64>) -> Result<Field1D> {
    let grid = g.scaled(1.0 / mu)?;
    let s = mu.sqrt();
    let field = Field1D::new(grid, values.into_iter().map(|v| v * s).collect())?;
    field.check_decay()?;
    Ok(field)
}

/// Numerical minimizer by normalized gradient flow from a centered Gaussian.
pub fn solve_numeric(p: &OneDProblem, g: &Grid1D, tol: f64) -> Result<OneDSolution> {
    let mu = working_scale(p);
    let b = p.coupling_b / mu;
    let width = if b > 0.0 { 2.0 / (p.mass_a * b) } else { 1.0 };
    solve_numeric_from(p, g, tol, &Field1D::new(*g, gaussian_guess(g, width))?)
}

fn working_scale(p: &OneDProblem) -> f64 {
    (p.mass_a * p.coupling_b / 4.0).max(1.0)
}

/// Numerical minimizer from a caller-supplied start. The start is read on the
/// working grid, i.e. after the rescaling to unit minimizer width.
pub fn solve_numeric_from(
    p: &OneDProblem,
    g: &Grid1D,
    tol: f64,
    initial: &Field1D,
) -> Result<OneDSolution> {
    check_tol(tol)?;
    ensure(initial.grid() == g, || Error::InvalidField("initial field lives on another grid".into()))?;
    ensure(initial.max_abs() > 0.0, || Error::InvalidField("initial field is zero".into()))?;
    if p.coupling_b == 0.0 {
        return Ok(degenerate_solution(g));
    }
    let mu = working_scale(p);
    let spec = Spectral::new(*g);
    let out = flow::minimize(
        &spec,
        1.0,
        p.mass_a,
        &mut Local(p.coupling_b / mu),
        initial.values().to_vec(),
        FlowSettings::new(tol),
    )?;
    Ok(OneDSolution {
        energy: mu * mu * out.energy,
        minimizer: unscale(g, mu, out.values)?,
        iterations: out.iterations,
        gradient_residual: out.residual,
        degenerate: false,
    })
}

/// Weight function `w(k) ≥ 0`.
pub type Weight = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `inf { κ₁∫|f'|² - λ∫_{|k|≤K₃} w(k)|ρ̂(k)|² dk : ∫f² = 1 }`.
#[derive(Clone)]
pub struct WeightedProblem {
    kappa1: f64,
    lambda: f64,
    weight: Weight,
    cutoff_k3: f64,
}

impl fmt::Debug for WeightedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedProblem")
            .field("kappa1", &self.kappa1)
            .field("lambda", &self.lambda)
            .field("cutoff_k3", &self.cutoff_k3)
            .finish_non_exhaustive()
    }
}

impl WeightedProblem {
    /// `cutoff_k3` may be `f64::INFINITY` for no cutoff.
    pub fn new(kappa1: f64, lambda: f64, weight: Weight, cutoff_k3: f64) -> Result<Self> {
        positive("kappa1", kappa1)?;
        ensure(lambda.is_finite() && lambda >= 0.0, || {
            Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}"))
        })?;
        ensure(cutoff_k3 > 0.0, || {
            Error::InvalidParameter(format!("cutoff must be > 0, got {cutoff_k3}"))
        })?;
        Ok(Self { kappa1, lambda, weight, cutoff_k3 })
    }

    pub fn kappa1(&self) -> f64 {
        self.kappa1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn cutoff_k3(&self) -> f64 {
        self.cutoff_k3
    }

    pub fn weight(&self, k: f64) -> f64 {
        (self.weight)(k)
    }

    /// Weight sampled on the dual grid of `g` inside the cutoff, with `q ↦ w(μq)`.
    fn sampled(&self, g: &Grid1D, mu: f64) -> Result<Vec<f64>> {
        (0..g.n())
            .map(|m| {
                let k = mu * g.wavenumber(m);
                if k.abs() > self.cutoff_k3 {
                    return Ok(0.0);
                }
                let w = (self.weight)(k);
                ensure(w.is_finite() && w >= 0.0, || {
                    Error::InvalidParameter(format!("weight w({k}) = {w} is not finite and >= 0"))
                })?;
                Ok(w)
            })
            .collect()
    }
}

/// Minimizes the weighted functional at unit mass.
pub fn solve_weighted(wp: &WeightedProblem, g: &Grid1D, tol: f64) -> Result<OneDSolution> {
    check_tol(tol)?;
    let sup = wp.sampled(g, 1.0)?.into_iter().fold(0.0, f64::max);
    if wp.lambda == 0.0 || sup == 0.0 {
        return Ok(degenerate_solution(g));
    }
    let b_eff = 2.0 * PI * wp.lambda * sup / wp.kappa1;
    let mu = (b_eff / 4.0).max(1.0);
    let lambda = wp.lambda / mu;
    let weights = wp.sampled(g, mu)?;
    let sup_work = weights.iter().copied().fold(0.0, f64::max);
    // Lower envelope from the sharp 1D inequality with w ≤ sup w.
    let envelope = -(2.0 * PI * lambda * sup_work).powi(2) / (12.0 * wp.kappa1);
    let mut settings = FlowSettings::new(tol);
    settings.energy_floor = 2.0 * envelope - 1.0;
    let spec = Spectral::new(*g);
    let mut attraction = Multiplier {
        spectral: spec.clone(),
        scaled_weights: weights.iter().map(|w| 4.0 * PI * lambda * w).collect(),
    };
    let width = 2.0 * wp.kappa1 / (2.0 * PI * lambda * sup_work);
    let out = flow::minimize(&spec, wp.kappa1, 1.0, &mut attraction, gaussian_guess(g, width), settings)?;
    if out.energy < envelope * (1.0 + 1e-6) - 1e-12 {
        return Err(Error::UnboundedBelow(format!(
            "energy {:.6e} is below the stability envelope {envelope:.6e}",
            out.energy
        )));
    }
    Ok(OneDSolution {
        energy: mu * mu * out.energy,
        minimizer: unscale(g, mu, out.values)?,
        iterations: out.iterations,
        gradient_residual: out.residual,
        degenerate: false,
    })
}
