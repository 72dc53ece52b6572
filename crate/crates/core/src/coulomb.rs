//! Longitudinal Coulomb energy `D = ½∬ρ(x)ρ(y)V(x-y)` of product states and
//! its decomposition into a local main term and two remainders.

use crate::error::{ensure, Error, Result};
use crate::grid::{kinetic, mass, quartic, DensityProfile, Field1D, Grid1D, Spectral};
use crate::landau::{effective_potential_fourier, EffectiveKernel, LongitudinalKernel, RadialTransverseDensity, TransverseKernel};
use crate::quad::{adaptive, adaptive_to_infinity, Integral};
use crate::special::{expint_n_complex, EULER_GAMMA};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Minimum of `√B·L/2` for the truncated-kernel tail expansion.
const MIN_TAIL_ARGUMENT: f64 = 8.0;
/// Largest `h·(cusp scale)` accepted by the real-space path.
const MAX_CUSP_RESOLUTION: f64 = 0.1;

/// Coefficients of `V_eff(z) ~ Σ_j e_j z^{-(2j+1)}` while they keep shrinking at `z = L`.
fn tail_coefficients(b: f64, l: f64) -> Vec<f64> {
    let mut e = vec![1.0];
    loop {
        let j = e.len() as f64;
        let next = -e[e.len() - 1] * (2.0 * j - 1.0) * 2.0 / b;
        let term = next.abs() / l.powf(2.0 * j);
        let prev = e[e.len() - 1].abs() / l.powf(2.0 * (j - 1.0));
        if term >= prev || term < 1e-18 || e.len() > 200 {
            break;
        }
        e.push(next);
    }
    e
}

/// `∫_{-L}^{L} V_eff(z) e^{-ikz} dz`.
fn truncated_transform(k: f64, b: f64, l: f64, e: &[f64]) -> f64 {
    if k == 0.0 {
        let tail: f64 = e.iter().enumerate().skip(1).map(|(j, c)| c * l.powi(-2 * j as i32) / (2 * j) as f64).sum();
        return EULER_GAMMA + (b * l * l).ln() - 2.0 * tail;
    }
    let z = Complex64::new(0.0, -k * l);
    let tail: f64 = e
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let n = 2 * j as u32 + 1;
            c * l.powi(1 - n as i32) * expint_n_complex(n, z).re
        })
        .sum();
    effective_potential_fourier(k, b) / PI - 2.0 * tail
}

/// Spectral convolution with `V_eff(·;B)` on a grid: the kernel is truncated at
/// `|z| = 2T` and applied on a zero-padded box of period `4T`, which reproduces
/// the aperiodic convolution of the sampled density exactly.
#[derive(Clone)]
pub struct CoulombKernel {
    grid: Grid1D,
    b: f64,
    multiplier: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CoulombKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoulombKernel").field("grid", &self.grid).field("b", &self.b).finish_non_exhaustive()
    }
}

impl CoulombKernel {
    pub fn new(grid: Grid1D, b: f64) -> Result<Self> {
        crate::error::positive("B", b)?;
        let l = 2.0 * grid.half_width();
        ensure(b.sqrt() * l / 2.0 >= MIN_TAIL_ARGUMENT, || {
            Error::DomainTooSmall(format!(
                "√B·T = {} < {MIN_TAIL_ARGUMENT}; widen the box for the truncated kernel",
                b.sqrt() * grid.half_width()
            ))
        })?;
        let e = tail_coefficients(b, l);
        let np = 2 * grid.n();
        let dk = PI / (2.0 * grid.half_width());
        let multiplier = (0..np)
            .map(|m| {
                let s = if m <= np / 2 { m as f64 } else { m as f64 - np as f64 };
                truncated_transform(s.abs() * dk, b, l, &e)
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid,
            b,
            multiplier,
            forward: planner.plan_fft_forward(np),
            inverse: planner.plan_fft_inverse(np),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `Φ(t_j) = ∫ V_eff(t_j - s) ρ(s) ds`.
    pub fn potential(&self, rho: &[f64]) -> Vec<f64> {
        let n = self.grid.n();
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        for (c, r) in buf.iter_mut().zip(rho) {
            c.re = *r;
        }
        self.forward.process(&mut buf);
        for (c, w) in buf.iter_mut().zip(&self.multiplier) {
            *c *= *w;
        }
        self.inverse.process(&mut buf);
        let s = 1.0 / (2 * n) as f64;
        buf[..n].iter().map(|c| c.re * s).collect()
    }

    /// `½∬ρ₁(x)ρ₂(y)V_eff(x-y)`.
    pub fn cross_energy(&self, rho1: &[f64], rho2: &[f64]) -> f64 {
        let phi = self.potential(rho2);
        0.5 * self.grid.spacing() * rho1.iter().zip(&phi).map(|(r, p)| r * p).sum::<f64>()
    }

    pub fn energy(&self, rho: &[f64]) -> f64 {
        self.cross_energy(rho, rho)
    }
}

/// `D(|g_B⊗f|², |g_B⊗f|²)` by spectral convolution with `V_eff`.
pub fn coulomb_d_product(f: &Field1D, b: f64) -> Result<f64> {
    f.check_decay()?;
    let rho = DensityProfile::from_field(f);
    Ok(CoulombKernel::new(*f.grid(), b)?.energy(rho.values()))
}

/// `D` by trapezoidal quadrature of the sampled kernel against the density
/// autocorrelation, with Euler–Maclaurin corrections for the cusp at `z = 0`.
pub fn coulomb_d_real_space(rho: &DensityProfile, kernel: &impl LongitudinalKernel) -> Result<f64> {
    let g = *rho.grid();
    let h = g.spacing();
    ensure(h * kernel.cusp_scale() <= MAX_CUSP_RESOLUTION, || {
        Error::Resolution(format!(
            "h·scale = {:.3e} > {MAX_CUSP_RESOLUTION}; refine the grid to resolve the kernel cusp",
            h * kernel.cusp_scale()
        ))
    })?;
    let n = g.n();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(2 * n);
    let inv = planner.plan_fft_inverse(2 * n);
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for (c, r) in buf.iter_mut().zip(rho.values()) {
        c.re = *r;
    }
    fwd.process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex64::new(c.norm_sqr(), 0.0);
    }
    inv.process(&mut buf);
    let scale = h / (2 * n) as f64;
    let trap: f64 = (0..n)
        .map(|j| {
            let a = buf[j].re * scale;
            let v = kernel.value(j as f64 * h);
            if j == 0 {
                0.5 * a * v
            } else {
                a * v
            }
        })
        .sum::<f64>()
        * h;

    // A^{(2m)}(0) = (-1)^m ∫(ρ^{(m)})².
    let spec = Spectral::new(g);
    let a_even: Vec<f64> = (0..4)
        .map(|m| {
            let p = spec.derivative_power(rho.values(), m);
            if m % 2 == 0 {
                p
            } else {
                -p
            }
        })
        .collect();
    let bernoulli = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut correction = 0.0;
    let mut factorial = 1.0;
    for (k, b2k) in bernoulli.iter().enumerate() {
        let order = 2 * k + 1;
        factorial *= ((2 * k + 1) * (2 * k + 2)) as f64;
        let mut deriv = 0.0;
        let mut binom = 1.0;
        for m in 0..=order {
            if m % 2 == 0 {
                deriv += binom * kernel.derivative_at_origin(order - m) * a_even[m / 2];
            }
            binom = binom * (order - m) as f64 / (m + 1) as f64;
        }
        correction += b2k * h.powi(2 * k as i32 + 2) / factorial * deriv;
    }
    Ok(trap + correction)
}

/// `D = (1/2π²)∫₀^{π/h} |ρ̂(k)|² U(k;B) dk` by adaptive quadrature with `ρ̂` summed directly.
pub fn coulomb_d_continuum(rho: &DensityProfile, b: f64) -> Result<Integral> {
    crate::error::positive("B", b)?;
    let k_max = PI / rho.grid().spacing();
    let r = adaptive(
        |u| {
            let k = u * u;
            if k == 0.0 {
                return 0.0;
            }
            rho.fourier_at(k).norm_sqr() * effective_potential_fourier(k, b) * 2.0 * u
        },
        0.0,
        k_max.sqrt(),
        1e-300,
        1e-12,
    )?;
    let s = 1.0 / (2.0 * PI * PI);
    Ok(Integral { value: r.value * s, error: r.error * s })
}

/// `C_B = ln B/2 - ln ln B`.
pub fn main_coefficient(b: f64) -> Result<f64> {
    ensure(b.is_finite() && b > std::f64::consts::E, || {
        Error::InvalidParameter(format!("main coefficient needs B > e, got {b}"))
    })?;
    Ok(b.ln() / 2.0 - b.ln().ln())
}

/// `K_B(r) = ln(1 + √(1 + (ln B)² r²)) - ln(√B r)`.
pub fn kernel_kb(r: f64, b: f64) -> f64 {
    if r == 0.0 {
        return f64::INFINITY;
    }
    let l = b.ln();
    (1.0 + (1.0 + l * l * r * r).sqrt()).ln() - (b.sqrt() * r).ln()
}

/// Short-range part `-ln(√B r)` for `r ≤ 1/√B`, zero beyond.
pub fn kernel_kb2(r: f64, b: f64) -> f64 {
    if r == 0.0 {
        return f64::INFINITY;
    }
    (-(b.sqrt() * r).ln()).max(0.0)
}

/// Bounded part `K_B - K_B^{(2)}`.
pub fn kernel_kb1(r: f64, b: f64) -> f64 {
    let l = b.ln();
    let log_part = (1.0 + (1.0 + l * l * r * r).sqrt()).ln();
    log_part - (b.sqrt() * r).ln().max(0.0)
}

/// `∬|g_B|²(x)|g_B|²(y) K_B(x-y) dx dy`, with the logarithmic piece done analytically.
pub fn kernel_kb_average(b: f64) -> Result<Integral> {
    ensure(b > 1.0, || Error::InvalidParameter(format!("K_B needs B > 1, got {b}")))?;
    let c = b.ln().powi(2) / b;
    let smooth = adaptive_to_infinity(
        |x| 0.5 * x * (-x * x / 4.0).exp() * (1.0 + (1.0 + c * x * x).sqrt()).ln(),
        0.0,
        1e-15,
        1e-13,
    )?;
    Ok(Integral { value: smooth.value + 0.5 * (EULER_GAMMA - 4f64.ln()), error: smooth.error })
}

/// `R^{(2)} = ∫f⁴ · ∬|g_B|²|g_B|²K_B`.
pub fn r2_term(f: &Field1D, b: f64) -> Result<f64> {
    Ok(quartic(f) * kernel_kb_average(b)?.value)
}

/// `(ln B/2)‖φ‖⁴ + 4(ln B)^{-1/2}‖φ‖^{5/2}‖∂₃φ‖^{3/2}`.
pub fn r1_bound(f: &Field1D, b: f64) -> Result<f64> {
    ensure(b > 1.0, || Error::InvalidParameter(format!("R1 bound needs B > 1, got {b}")))?;
    Ok(r1_bound_from_norms(mass(f), kinetic(f)?, b))
}

/// The R1 bound from `‖φ‖² = mass` and `‖∂₃φ‖² = kin`.
pub fn r1_bound_from_norms(mass: f64, kin: f64, b: f64) -> f64 {
    let l = b.ln();
    l / 2.0 * mass * mass + 4.0 / l.sqrt() * mass.powf(1.25) * kin.powf(0.75)
}

/// Terms of the decomposition `D = C_B∫f⁴ + R1 + R2` on a product state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionLedger {
    pub d_total: f64,
    pub main_term: f64,
    pub main_coefficient: f64,
    pub r1: f64,
    pub r1_bound: f64,
    pub r2: f64,
    pub quadrature_error_estimate: f64,
}

impl DecompositionLedger {
    pub fn closure_defect(&self) -> f64 {
        (self.d_total - self.main_term - self.r1 - self.r2).abs()
    }

    pub fn r1_within_bound(&self) -> bool {
        self.r1.abs() <= self.r1_bound + self.quadrature_error_estimate
    }
}

/// Builds the ledger; `D` comes from the spectral path and, where the grid
/// resolves the cusp, its gap to the real-space path enters the error estimate.
pub fn decompose(f: &Field1D, b: f64) -> Result<DecompositionLedger> {
    let c_b = main_coefficient(b)?;
    let d_total = coulomb_d_product(f, b)?;
    let rho = DensityProfile::from_field(f);
    let path_gap = match coulomb_d_real_space(&rho, &EffectiveKernel { b }) {
        Ok(d) => (d - d_total).abs(),
        Err(Error::Resolution(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let q = quartic(f);
    let kb = kernel_kb_average(b)?;
    let main_term = c_b * q;
    let r2 = q * kb.value;
    let r1 = d_total - main_term - r2;
    let quadrature_error_estimate = path_gap + q * kb.error + 1e-12 * d_total.abs();
    Ok(DecompositionLedger {
        d_total,
        main_term,
        main_coefficient: c_b,
        r1,
        r1_bound: r1_bound(f, b)?,
        r2,
        quadrature_error_estimate,
    })
}

/// Outcome of the off-diagonal Coulomb inequality on a Landau-level mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffDiagonalCheck {
    pub d_total: f64,
    pub d_lowest: f64,
    pub d_higher: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
}

/// Checks `D(φ) ≤ (1+3ε+2ε²)D(P₀φ) + (1+ε)²(1+2ε)ε^{-3}D(P_>φ)` for
/// `φ = (c₀g_B + c₁ψ₁) ⊗ f` with `ψ₁` the radial first excited Landau state.
pub fn offdiag_bound_check(eps: f64, c0: f64, c1: f64, f: &Field1D, b: f64) -> Result<OffDiagonalCheck> {
    ensure(eps > 0.0 && eps <= 1.0, || Error::InvalidParameter(format!("ε must lie in (0, 1], got {eps}")))?;
    ensure((c0 * c0 + c1 * c1 - 1.0).abs() < 1e-12, || {
        Error::InvalidParameter(format!("need c0² + c1² = 1, got {}", c0 * c0 + c1 * c1))
    })?;
    f.check_decay()?;
    let rho = DensityProfile::from_field(f);
    let z_min = f.grid().spacing();
    let energy = |t: &RadialTransverseDensity| -> Result<f64> {
        coulomb_d_real_space(&rho, &TransverseKernel::new(t, z_min)?)
    };
    let d_total = energy(&RadialTransverseDensity::mixture(b, c0, c1)?)?;
    let d_lowest = if c0 == 0.0 { 0.0 } else { c0.powi(4) * energy(&RadialTransverseDensity::ground(b)?)? };
    let d_higher = if c1 == 0.0 { 0.0 } else { c1.powi(4) * energy(&RadialTransverseDensity::mixture(b, 0.0, 1.0)?)? };
    let rhs = (1.0 + 3.0 * eps + 2.0 * eps * eps) * d_lowest
        + (1.0 + eps).powi(2) * (1.0 + 2.0 * eps) / eps.powi(3) * d_higher;
    let margin = rhs - d_total;
    Ok(OffDiagonalCheck { d_total, d_lowest, d_higher, rhs, margin, passed: margin >= -1e-10 * rhs.abs() })
}
