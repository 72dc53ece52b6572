//! Product-ansatz Pekar functional `B + ∫|f'|² - α D(f)` and the tools built on it.

use crate::coulomb::{coulomb_d_continuum, CoulombKernel};
use crate::error::{ensure, positive, Error, Result};
use crate::flow::{self, Attraction, FlowSettings};
use crate::grid::{kinetic, mass, DensityProfile, Field1D, Grid1D, Spectral};
use crate::landau::transverse_kinetic;
use crate::oned::{closed_form_minimizer, sech_profile, OneDProblem, OneDSolution};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

/// Field strength `B > 1` and coupling `α ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    b: f64,
    alpha: f64,
}

impl PhysParams {
    pub fn new(b: f64, alpha: f64) -> Result<Self> {
        ensure(b.is_finite() && b > 1.0, || Error::InvalidParameter(format!("B must be finite and > 1, got {b}")))?;
        ensure(alpha.is_finite() && alpha >= 0.0, || {
            Error::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}"))
        })?;
        Ok(Self { b, alpha })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `g_B ⊗ f` with a unit-mass longitudinal factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PekarProductState {
    params: PhysParams,
    f: Field1D,
}

impl PekarProductState {
    pub fn new(params: PhysParams, f: Field1D) -> Result<Self> {
        let m = mass(&f);
        ensure((m - 1.0).abs() <= 1e-8, || Error::InvalidField(format!("longitudinal mass is {m}, expected 1")))?;
        f.check_decay()?;
        Ok(Self { params, f })
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn f(&self) -> &Field1D {
        &self.f
    }
}

/// Per-term energy of a product state; `binding = longitudinal_kinetic + coulomb`
/// is kept separately because `total` loses digits against `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub transverse: f64,
    pub longitudinal_kinetic: f64,
    pub coulomb: f64,
    pub binding: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn new(b: f64, kin: f64, coulomb: f64) -> Self {
        let transverse = transverse_kinetic(b);
        let binding = kin + coulomb;
        Self { transverse, longitudinal_kinetic: kin, coulomb, binding, total: transverse + binding }
    }
}

/// Evaluates the product-ansatz Pekar functional.
pub fn pekar_energy(s: &PekarProductState) -> Result<EnergyBreakdown> {
    let p = s.params;
    let kin = kinetic(&s.f)?;
    let coulomb = if p.alpha == 0.0 {
        0.0
    } else {
        let rho = DensityProfile::from_field(&s.f);
        -p.alpha * CoulombKernel::new(*s.f.grid(), p.b)?.energy(rho.values())
    };
    Ok(EnergyBreakdown::new(p.b, kin, coulomb))
}

/// Grid policy for sweeps: `n` points on `T = base/max(1, α ln B/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPolicy {
    pub n: usize,
    pub base_half_width: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { n: 8192, base_half_width: 60.0 }
    }
}

impl GridPolicy {
    pub fn grid(&self, p: &PhysParams) -> Result<Grid1D> {
        Grid1D::new(self.n, self.base_half_width / (p.alpha * p.b.ln() / 4.0).max(1.0))
    }
}

/// Trial longitudinal profile `f_{1, ln B/2}`.
pub fn trial_state(b: f64, alpha: f64, g: &Grid1D) -> Result<PekarProductState> {
    ensure(b > std::f64::consts::E, || Error::InvalidParameter(format!("trial state needs B > e, got {b}")))?;
    let f = closed_form_minimizer(&OneDProblem::new(1.0, b.ln() / 2.0)?, g)?;
    PekarProductState::new(PhysParams::new(b, alpha)?, f)
}

/// Energy of the trial state; its kinetic part equals `(ln B)²/48`.
pub fn trial_energy(b: f64, alpha: f64, g: &Grid1D) -> Result<EnergyBreakdown> {
    pekar_energy(&trial_state(b, alpha, g)?)
}

struct CoulombAttraction {
    kernel: CoulombKernel,
    alpha: f64,
}

impl Attraction for CoulombAttraction {
    fn potential(&mut self, rho: &[f64]) -> Vec<f64> {
        let mut phi = self.kernel.potential(rho);
        phi.iter_mut().for_each(|v| *v *= self.alpha);
        phi
    }
}

/// Minimizes the product-ansatz functional over unit-mass `f`. The returned
/// solution's `energy` is the binding part `∫|f'|² - αD`.
pub fn pekar_minimize(params: &PhysParams, g: &Grid1D, tol: f64) -> Result<(OneDSolution, EnergyBreakdown)> {
    positive("tolerance", tol)?;
    if params.alpha == 0.0 {
        let sol = OneDSolution {
            energy: 0.0,
            minimizer: Field1D::zeros(*g),
            iterations: 0,
            gradient_residual: 0.0,
            degenerate: true,
        };
        return Ok((sol, EnergyBreakdown::new(params.b, 0.0, 0.0)));
    }
    let kernel = CoulombKernel::new(*g, params.b)?;
    let b0 = (params.alpha * params.b.ln() / 2.0).max(1e-3);
    let init: Vec<f64> = g.points().into_iter().map(|t| sech_profile(1.0, b0, t)).collect();
    let spec = Spectral::new(*g);
    let mut attraction = CoulombAttraction { kernel, alpha: params.alpha };
    let out = flow::minimize(&spec, 1.0, 1.0, &mut attraction, init, FlowSettings::new(tol))?;
    let f = Field1D::new(*g, out.values)?;
    f.check_decay()?;
    let breakdown = EnergyBreakdown::new(params.b, out.kinetic, -out.interaction);
    let sol = OneDSolution {
        energy: out.energy,
        minimizer: f,
        iterations: out.iterations,
        gradient_residual: out.residual,
        degenerate: false,
    };
    Ok((sol, breakdown))
}

/// Both sides of `E_{B,α}[g_B ⊗ f_α] = α² E_{B/α²,1}[g ⊗ f]`, `f_α(t) = √α f(αt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub lhs: EnergyBreakdown,
    pub rhs: EnergyBreakdown,
    pub kinetic_defect: f64,
    pub coulomb_defect: f64,
    pub passed: bool,
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Checks the coupling-scaling identity with `f` sampled on its own grid.
pub fn scaling_identity_check(b: f64, alpha: f64, f: &Field1D) -> Result<ScalingCheck> {
    positive("alpha", alpha)?;
    let base = PekarProductState::new(PhysParams::new(b / (alpha * alpha), 1.0)?, f.clone())?;
    let scaled_grid = f.grid().scaled(1.0 / alpha)?;
    let f_alpha = Field1D::new(scaled_grid, f.values().iter().map(|v| v * alpha.sqrt()).collect())?;
    let scaled = PekarProductState::new(PhysParams::new(b, alpha)?, f_alpha)?;
    let lhs = pekar_energy(&scaled)?;
    let r = pekar_energy(&base)?;
    let a2 = alpha * alpha;
    let rhs = EnergyBreakdown {
        transverse: a2 * r.transverse,
        longitudinal_kinetic: a2 * r.longitudinal_kinetic,
        coulomb: a2 * r.coulomb,
        binding: a2 * r.binding,
        total: a2 * r.total,
    };
    let kinetic_defect = rel_gap(lhs.longitudinal_kinetic, rhs.longitudinal_kinetic);
    let coulomb_defect = rel_gap(lhs.coulomb, rhs.coulomb);
    let passed = kinetic_defect <= 1e-8 && coulomb_defect <= 1e-8 && rel_gap(lhs.total, rhs.total) <= 1e-8;
    Ok(ScalingCheck { lhs, rhs, kinetic_defect, coulomb_defect, passed })
}

/// Value of the classical-field energy at amplitude `s·a_opt`:
/// `B + ∫|f'|² + (s² - 2s)·αD`, with `D` from the Fourier-side integral.
pub fn coherent_energy(state: &PekarProductState, amplitude_scale: f64) -> Result<f64> {
    let p = state.params;
    let kin = kinetic(&state.f)?;
    let x = if p.alpha == 0.0 {
        0.0
    } else {
        p.alpha * coulomb_d_continuum(&DensityProfile::from_field(&state.f), p.b)?.value
    };
    let s = amplitude_scale;
    Ok(transverse_kinetic(p.b) + kin + (s * s - 2.0 * s) * x)
}

/// Infimum over classical field amplitudes, attained at `a_opt`.
pub fn coherent_infimum(state: &PekarProductState) -> Result<f64> {
    coherent_energy(state, 1.0)
}

/// One swept field strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub b: f64,
    pub alpha: f64,
    pub minimum: EnergyBreakdown,
    pub trial: EnergyBreakdown,
    pub iterations: usize,
    pub residual: f64,
}

/// Minimizes at every `B` (in parallel); rows come back in input order.
pub fn sweep(b_values: &[f64], alpha: f64, policy: &GridPolicy, tol: f64) -> Result<Vec<SweepPoint>> {
    ensure(b_values.windows(2).all(|w| w[0] < w[1]), || {
        Error::InvalidParameter("B values must be strictly increasing".into())
    })?;
    let threshold = std::f64::consts::E.powf(std::f64::consts::E);
    ensure(b_values.iter().all(|&b| b > threshold), || {
        Error::InvalidParameter("sweep needs every B > e^e".into())
    })?;
    b_values
        .par_iter()
        .map(|&b| {
            let p = PhysParams::new(b, alpha)?;
            let g = policy.grid(&p)?;
            let (sol, minimum) = pekar_minimize(&p, &g, tol)?;
            let trial = trial_energy(b, alpha, &g)?;
            Ok(SweepPoint { b, alpha, minimum, trial, iterations: sol.iterations, residual: sol.gradient_residual })
        })
        .collect()
}

/// Least-squares coefficients of `E - B = -c₂X² + c₃XY + c₄X`, `X = ln B`, `Y = ln ln B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub residual_rms: f64,
    pub condition_number: f64,
    pub fit_window: Vec<f64>,
}

const MAX_CONDITION: f64 = 1e12;

/// Fits `(B, E - B)` pairs.
pub fn fit_asymptotics(points: &[(f64, f64)]) -> Result<AsymptoticFit> {
    ensure(points.len() >= 4, || Error::Fit(format!("need at least 4 points, got {}", points.len())))?;
    ensure(points.iter().all(|(b, e)| *b > std::f64::consts::E && b.is_finite() && e.is_finite()), || {
        Error::Fit("every point needs finite values and B > e".into())
    })?;
    let rows = points.len();
    let mut a = DMatrix::<f64>::zeros(rows, 3);
    let y = DVector::from_iterator(rows, points.iter().map(|p| p.1));
    for (i, (b, _)) in points.iter().enumerate() {
        let x = b.ln();
        let yy = x.ln();
        a[(i, 0)] = -x * x;
        a[(i, 1)] = x * yy;
        a[(i, 2)] = x;
    }
    let scales: Vec<f64> = (0..3).map(|j| a.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    ensure(condition_number < MAX_CONDITION, || {
        Error::Fit(format!("regressors are collinear (condition number {condition_number:.3e})"))
    })?;
    let coef = svd.solve(&y, 0.0).map_err(|e| Error::Fit(e.to_string()))?;
    let resid = &y - &a * &coef;
    Ok(AsymptoticFit {
        c2: coef[0] / scales[0],
        c3: coef[1] / scales[1],
        c4: coef[2] / scales[2],
        residual_rms: (resid.norm_squared() / rows as f64).sqrt(),
        condition_number,
        fit_window: points.iter().map(|p| p.0).collect(),
    })
}
