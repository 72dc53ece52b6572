//! The explicit constant chain for a lower bound on the projected, cut-off
//! Fröhlich operator, evaluated term by term.

use crate::error::{ensure, positive, Error, Result};
use crate::grid::Grid1D;
use crate::oned::{solve_weighted, WeightedProblem};
use crate::quad::adaptive;
use crate::special::exp_e1;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// `κ = 1 - 8α/(πK)`.
pub fn kappa(k: f64, alpha: f64) -> Result<f64> {
    ensure(k > 8.0 * alpha / PI, || {
        Error::InvalidParameter(format!("cutoff K = {k} must exceed 8α/π = {}", 8.0 * alpha / PI))
    })?;
    Ok(1.0 - 8.0 * alpha / (PI * k))
}

/// `κ₁ = κ - (8α/πK₃)∫₀^∞ e^{-K₃²t/2B}/(1+t) dt = κ - (8α/πK₃) e^x E₁(x)`, `x = K₃²/2B`.
pub fn kappa1(kappa: f64, k3: f64, b: f64, alpha: f64) -> Result<f64> {
    positive("K3", k3)?;
    positive("B", b)?;
    Ok(kappa - 8.0 * alpha / (PI * k3) * exp_e1(k3 * k3 / (2.0 * b)))
}

/// `κ₂ = κ - 2αK₃/(πK⊥²)`.
pub fn kappa2(kappa: f64, k3: f64, kperp: f64, alpha: f64) -> Result<f64> {
    ensure(kperp >= 1.0, || Error::InvalidParameter(format!("K⊥ must be >= 1, got {kperp}")))?;
    Ok(kappa - 2.0 * alpha * k3 / (PI * kperp * kperp))
}

/// `v(k₃)² = π ln((K⊥² + k₃²)/(1 + k₃²))`.
pub fn coupling_v_squared(k3: f64, kperp: f64) -> f64 {
    PI * ((kperp * kperp + k3 * k3) / (1.0 + k3 * k3)).ln()
}

/// `v(k₃)`.
pub fn coupling_v(k3: f64, kperp: f64) -> Result<f64> {
    ensure(kperp >= 1.0, || Error::InvalidParameter(format!("K⊥ must be >= 1, got {kperp}")))?;
    Ok(coupling_v_squared(k3, kperp).sqrt())
}

/// `R = ∫_{|k₃|≤K₃} v² dk₃` by adaptive quadrature.
pub fn total_r(k3: f64, kperp: f64) -> Result<f64> {
    ensure(kperp >= 1.0, || Error::InvalidParameter(format!("K⊥ must be >= 1, got {kperp}")))?;
    ensure(k3 >= 0.0, || Error::InvalidParameter(format!("K3 must be >= 0, got {k3}")))?;
    Ok(2.0 * adaptive(|k| coupling_v_squared(k, kperp), 0.0, k3, 1e-300, 1e-13)?.value)
}

/// Antiderivative form of [`total_r`].
pub fn total_r_closed_form(k3: f64, kperp: f64) -> f64 {
    2.0 * PI
        * (k3 * ((kperp * kperp + k3 * k3) / (1.0 + k3 * k3)).ln() + 2.0 * kperp * (k3 / kperp).atan()
            - 2.0 * k3.atan())
}

/// `V(b) = (∫_b v²)^{1/2}` over the block `[lo, hi]`.
pub fn block_v(lo: f64, hi: f64, kperp: f64) -> Result<f64> {
    ensure(lo <= hi, || Error::InvalidParameter(format!("empty block [{lo}, {hi}]")))?;
    ensure(kperp >= 1.0, || Error::InvalidParameter(format!("K⊥ must be >= 1, got {kperp}")))?;
    Ok(adaptive(|k| coupling_v_squared(k, kperp), lo, hi, 1e-300, 1e-13)?.value.sqrt())
}

/// `‖χ'‖²/L² = π²/L²` for the bump `χ(t) = √2 cos(πt)` on `[-1/2, 1/2]`.
pub fn localization_error(l: f64) -> Result<f64> {
    positive("L", l)?;
    Ok(PI * PI / (l * l))
}

/// `αK₃²L²R/(4π²γM²)`.
pub fn block_error(alpha: f64, k3: f64, l: f64, gamma: f64, m: u64, r: f64) -> Result<f64> {
    ensure(m >= 1, || Error::InvalidParameter("M must be >= 1".into()))?;
    ensure(gamma > 0.0 && gamma < 1.0, || Error::InvalidParameter(format!("γ must lie in (0,1), got {gamma}")))?;
    positive("L", l)?;
    Ok(alpha * k3 * k3 * l * l * r / (4.0 * PI * PI * gamma * (m as f64).powi(2)))
}

/// Rule for the representative momentum of each block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockRepresentative {
    Midpoint,
}

/// Cut-offs and localization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffParams {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K3")]
    pub k3: f64,
    #[serde(rename = "Kperp")]
    pub kperp: f64,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: u64,
    pub k_b: BlockRepresentative,
}

impl CutoffParams {
    /// Block width `2K₃/M`.
    pub fn block_width(&self) -> f64 {
        2.0 * self.k3 / self.m as f64
    }

    /// Representative `k_b` of block `i`, `0 ≤ i < M`.
    pub fn block_representative(&self, i: u64) -> f64 {
        match self.k_b {
            BlockRepresentative::Midpoint => -self.k3 + (i as f64 + 0.5) * self.block_width(),
        }
    }

    fn check(&self, alpha: f64) -> Result<()> {
        ensure(self.k > 8.0 * alpha / PI, || Error::InvalidParameter("K must exceed 8α/π".into()))?;
        ensure(self.k3 > 0.0 && self.k3 <= self.k, || {
            Error::InvalidParameter(format!("need 0 < K3 <= K, got K3 = {}", self.k3))
        })?;
        ensure(self.kperp >= 1.0 && self.kperp <= self.k, || {
            Error::InvalidParameter(format!("need 1 <= K⊥ <= K, got K⊥ = {}", self.kperp))
        })?;
        ensure(self.l.is_finite() && self.l > 0.0, || Error::InvalidParameter("L must be > 0".into()))?;
        ensure(self.gamma.is_finite(), || Error::InvalidParameter("γ must be finite".into()))
    }
}

/// `K = B(ln B)^{-4/3}`.
pub fn default_cutoff_k(b: f64) -> f64 {
    b * b.ln().powf(-4.0 / 3.0)
}

/// `K⊥ = √B`, `K₃ = κ^{-1/2}(ln B)^{3/2}`, `L² = κ^{1/5}K₃^{-3/5}(ln K⊥)^{-3/5}`,
/// `M = ⌊L^{-2}⌋`, `γ = κ^{4/5}K₃^{3/5}(ln K⊥)^{-7/5}`.
pub fn default_params(b: f64, alpha: f64, k: f64) -> Result<CutoffParams> {
    ensure(b >= 1e3, || Error::InvalidParameter(format!("default parameters need B >= 1e3, got {b}")))?;
    ensure(k >= b.sqrt(), || Error::InvalidParameter(format!("need K >= √B, got K = {k}")))?;
    let kap = kappa(k, alpha)?;
    let kperp = b.sqrt();
    let lk = kperp.ln();
    let k3 = kap.powf(-0.5) * b.ln().powf(1.5);
    let l2 = kap.powf(0.2) * k3.powf(-0.6) * lk.powf(-0.6);
    let gamma = kap.powf(0.8) * k3.powf(0.6) * lk.powf(-1.4);
    Ok(CutoffParams {
        k,
        k3,
        kperp,
        gamma,
        l: l2.sqrt(),
        m: (1.0 / l2).floor() as u64,
        k_b: BlockRepresentative::Midpoint,
    })
}

/// Every constant entering the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsLedger {
    pub kappa: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub localization_error: f64,
    pub block_error: f64,
    pub mode_count_error: f64,
    pub projection_constant: f64,
    pub firstcut_constant: f64,
}

/// Validity flags. `valid` needs the first three; the rest are informational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validity {
    pub valid: bool,
    pub kappa1_positive: bool,
    pub gamma_in_unit_interval: bool,
    pub m_at_least_one: bool,
    pub gamma_at_most_half: bool,
    pub kappa_window: bool,
}

/// Assembled lower bound `p0 = κ₂B + I - M - block - π²/L² - (1 + α/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCertificate {
    #[serde(rename = "B")]
    pub b: f64,
    pub alpha: f64,
    pub cutoffs: CutoffParams,
    pub ledger: ConstantsLedger,
    #[serde(rename = "I_value")]
    pub i_value: f64,
    #[serde(rename = "I_envelope")]
    pub i_envelope: f64,
    pub p0_bound: f64,
    pub validity: Validity,
    pub assumptions: Vec<String>,
}

impl LowerBoundCertificate {
    /// Recomputes `p0` from the stored ledger fields.
    pub fn recompute_p0(&self) -> f64 {
        assemble_p0(self.b, self.i_value, &self.ledger)
    }
}

fn assemble_p0(b: f64, i_value: f64, l: &ConstantsLedger) -> f64 {
    l.kappa2 * b + i_value - l.mode_count_error - l.block_error - l.localization_error - l.projection_constant
}

/// `-α²(ln K⊥)²/(12κ₁(1-γ)²)`, the sharp-inequality floor for `I`.
pub fn effective_i_envelope(kappa1: f64, gamma: f64, kperp: f64, alpha: f64) -> f64 {
    -(alpha * kperp.ln()).powi(2) / (12.0 * kappa1 * (1.0 - gamma).powi(2))
}

/// `I = inf [κ₁‖f'‖² - α/(4π²(1-γ))∫_{|k|≤K₃} v²|ρ̂|²]` at unit mass.
pub fn effective_i(kappa1: f64, gamma: f64, k3: f64, kperp: f64, alpha: f64, grid: &Grid1D, tol: f64) -> Result<f64> {
    ensure(gamma < 1.0, || Error::InvalidParameter(format!("γ must be < 1, got {gamma}")))?;
    ensure(kperp >= 1.0, || Error::InvalidParameter(format!("K⊥ must be >= 1, got {kperp}")))?;
    let lambda = alpha / (4.0 * PI * PI * (1.0 - gamma));
    let wp = WeightedProblem::new(kappa1, lambda, Arc::new(move |k| coupling_v_squared(k, kperp)), k3)?;
    Ok(solve_weighted(&wp, grid, tol)?.energy)
}

const ASSUMPTIONS: [&str; 3] = [
    "coherent-state step taken as given: each of the M blocks costs one unit, with block representatives at block midpoints",
    "localization bump chi(t) = sqrt(2) cos(pi t) on [-1/2, 1/2]",
    "lowest-Landau-level projected operator only; the full-operator bound is conditional on an unspecified constant",
];

/// Evaluates the lower-bound chain. Invalid parameter ranges produce a
/// certificate with `validity.valid = false` rather than an error.
pub fn certify_p0(
    b: f64,
    alpha: f64,
    k: f64,
    params: Option<CutoffParams>,
    grid: &Grid1D,
    tol: f64,
) -> Result<LowerBoundCertificate> {
    ensure(b.is_finite() && b > 1.0, || Error::InvalidParameter(format!("B must be > 1, got {b}")))?;
    ensure(alpha.is_finite() && alpha >= 0.0, || Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")))?;
    let cut = match params {
        Some(p) => p,
        None => default_params(b, alpha, k)?,
    };
    cut.check(alpha)?;
    let kap = kappa(cut.k, alpha)?;
    let k1 = kappa1(kap, cut.k3, b, alpha)?;
    let k2 = kappa2(kap, cut.k3, cut.kperp, alpha)?;
    let r = total_r(cut.k3, cut.kperp)?;
    let validity_core = (k1 > 0.0, cut.gamma > 0.0 && cut.gamma < 1.0, cut.m >= 1);
    let valid = validity_core.0 && validity_core.1 && validity_core.2;
    let block = if valid { block_error(alpha, cut.k3, cut.l, cut.gamma, cut.m, r)? } else { f64::NAN };
    let ledger = ConstantsLedger {
        kappa: kap,
        kappa1: k1,
        kappa2: k2,
        r,
        localization_error: localization_error(cut.l)?,
        block_error: block,
        mode_count_error: cut.m as f64,
        projection_constant: 1.0 + alpha / 2.0,
        firstcut_constant: 0.25,
    };
    let (i_value, i_envelope) = if valid {
        (effective_i(k1, cut.gamma, cut.k3, cut.kperp, alpha, grid, tol)?, effective_i_envelope(k1, cut.gamma, cut.kperp, alpha))
    } else {
        (f64::NAN, f64::NAN)
    };
    let lb = b.ln();
    let validity = Validity {
        valid,
        kappa1_positive: validity_core.0,
        gamma_in_unit_interval: validity_core.1,
        m_at_least_one: validity_core.2,
        gamma_at_most_half: cut.gamma <= 0.5,
        kappa_window: lb.powf(-0.5) <= kap && kap <= lb,
    };
    Ok(LowerBoundCertificate {
        b,
        alpha,
        cutoffs: cut,
        ledger,
        i_value,
        i_envelope,
        p0_bound: assemble_p0(b, i_value, &ledger),
        validity,
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

/// `p0 - C_M(ln B)²√(K/B) - 1/4`; conditional on the unspecified constant `C_M`.
pub fn conditional_full_bound(cert: &LowerBoundCertificate, c_m: f64) -> Result<f64> {
    ensure(c_m >= 0.0, || Error::InvalidParameter(format!("C_M must be >= 0, got {c_m}")))?;
    ensure(cert.validity.valid, || Error::InvalidParameter("certificate is not valid".into()))?;
    Ok(cert.p0_bound - c_m * cert.b.ln().powi(2) * (cert.cutoffs.k / cert.b).sqrt() - cert.ledger.firstcut_constant)
}

/// `B - C(ln B)²`.
pub fn rough_lower_formula(b: f64, c: f64) -> f64 {
    b - c * b.ln().powi(2)
}
