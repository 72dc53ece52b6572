//! Transverse physics: the lowest-Landau-level projector, the `I_k` operator,
//! and Coulomb kernels averaged over transverse densities.

use crate::error::{ensure, positive, Error, Result};
use crate::quad::GaussRule;
use crate::special::{erfcx, exp_e1, EULER_GAMMA};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Spectral gap factor: states orthogonal to the lowest level carry at least `3B`.
pub const HIGHER_LEVEL_FACTOR: f64 = 3.0;

pub type Point2 = [f64; 2];

fn wedge(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The Landau ground Gaussian `g_B(x) = √(B/2π) e^{-B|x|²/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransverseGaussian {
    b: f64,
}

impl TransverseGaussian {
    pub fn new(b: f64) -> Result<Self> {
        positive("B", b)?;
        Ok(Self { b })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn value(&self, x: Point2) -> f64 {
        (self.b / (2.0 * PI)).sqrt() * (-self.b * (x[0] * x[0] + x[1] * x[1]) / 4.0).exp()
    }

    /// Radial density `|g_B|²(r)`.
    pub fn density(&self, r: f64) -> f64 {
        self.b / (2.0 * PI) * (-self.b * r * r / 2.0).exp()
    }
}

/// Radial first-excited Landau state `(1 - B r²/2) g_B(r)`; normalized and
/// orthogonal to the lowest level.
pub fn first_excited_radial(b: f64, r: f64) -> f64 {
    (1.0 - b * r * r / 2.0) * (b / (2.0 * PI)).sqrt() * (-b * r * r / 4.0).exp()
}

/// Energy of the transverse factor in the product ansatz.
pub fn transverse_kinetic(b: f64) -> f64 {
    b
}

/// Integral kernel of the projector onto the lowest Landau level (symmetric gauge).
pub fn p0_kernel(x: Point2, y: Point2, b: f64) -> Complex64 {
    let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
    let amp = b / (2.0 * PI) * (-b * d2 / 4.0).exp();
    Complex64::from_polar(amp, b * wedge(x, y) / 2.0)
}

/// `e^{-|k|²/2B}`, the scalar factor in `P₀ e^{ik·x} P₀ = P₀ e^{-|k|²/2B} I_k P₀`.
pub fn projected_phase_factor(k: Point2, b: f64) -> f64 {
    (-(k[0] * k[0] + k[1] * k[1]) / (2.0 * b)).exp()
}

/// Kernel of `I_k`: `P₀(x,y) e^{k∧(x-y)/2} e^{ik·(x+y)/2}`.
pub fn ik_kernel(k: Point2, b: f64, x: Point2, y: Point2) -> Complex64 {
    let d = [x[0] - y[0], x[1] - y[1]];
    let s = [x[0] + y[0], x[1] + y[1]];
    p0_kernel(x, y, b) * Complex64::from_polar((wedge(k, d) / 2.0).exp(), (k[0] * s[0] + k[1] * s[1]) / 2.0)
}

/// Norm bound on `I_k`: `2 e^{|k|²/4B}`.
pub fn ik_norm_bound(k: Point2, b: f64) -> f64 {
    2.0 * ((k[0] * k[0] + k[1] * k[1]) / (4.0 * b)).exp()
}

/// Tensor Gauss–Legendre rule on `[-R, R]²` with `panels × 16` nodes per axis.
#[derive(Debug, Clone)]
pub struct PlaneRule {
    axis: GaussRule,
}

impl PlaneRule {
    pub fn new(half_width: f64, panels: usize) -> Self {
        let edges: Vec<f64> =
            (0..=panels).map(|i| -half_width + 2.0 * half_width * i as f64 / panels as f64).collect();
        Self { axis: GaussRule::composite(16, &edges) }
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &wx) in self.axis.nodes.iter().zip(&self.axis.weights) {
            for (&y, &wy) in self.axis.nodes.iter().zip(&self.axis.weights) {
                acc += f([x, y]) * (wx * wy);
            }
        }
        acc
    }
}

/// Plane integral with panel doubling until two successive rules agree to `tol`.
/// Returns the value and the last difference.
pub fn plane_integral(
    f: impl Fn(Point2) -> Complex64,
    half_width: f64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let mut panels = 4;
    let mut prev = PlaneRule::new(half_width, panels).integrate(&f);
    while panels < 128 {
        panels *= 2;
        let cur = PlaneRule::new(half_width, panels).integrate(&f);
        let diff = (cur - prev).norm();
        if diff <= tol * cur.norm().max(1e-300) || diff <= tol * 1e-3 {
            return Ok((cur, diff));
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!("plane rule did not settle on [-{half_width}, {half_width}]²")))
}

fn box_for(b: f64, centers: &[Point2]) -> f64 {
    let reach = centers.iter().map(|c| c[0].abs().max(c[1].abs())).fold(0.0, f64::max);
    12.0 / b.sqrt() + reach
}

/// `|∫P₀(x,z)P₀(z,y)dz - P₀(x,y)|` by plane quadrature.
pub fn p0_idempotency_residual(b: f64, x: Point2, y: Point2) -> Result<f64> {
    let (v, _) = plane_integral(|z| p0_kernel(x, z, b) * p0_kernel(z, y, b), box_for(b, &[x, y]), 1e-12)?;
    Ok((v - p0_kernel(x, y, b)).norm())
}

/// `|∫P₀(z,x)e^{ik·x}P₀(x,y)dx - e^{-|k|²/2B} I_k(z,y)|` by plane quadrature.
pub fn phase_identity_residual(k: Point2, b: f64, z: Point2, y: Point2) -> Result<f64> {
    let (v, _) = plane_integral(
        |x| p0_kernel(z, x, b) * Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]) * p0_kernel(x, y, b),
        box_for(b, &[z, y]),
        1e-12,
    )?;
    Ok((v - projected_phase_factor(k, b) * ik_kernel(k, b, z, y)).norm())
}

/// A lowest-Landau-level state `Σ c_j ψ_{a_j}` built from coherent states
/// `ψ_a = √(2π/B) P₀(·, a)`, normalized at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LowestLevelState {
    b: f64,
    centers: Vec<Point2>,
    coefficients: Vec<Complex64>,
}

impl LowestLevelState {
    pub fn new(b: f64, centers: Vec<Point2>, coefficients: Vec<Complex64>) -> Result<Self> {
        positive("B", b)?;
        ensure(!centers.is_empty() && centers.len() == coefficients.len(), || {
            Error::InvalidParameter("need matching, nonempty centers and coefficients".into())
        })?;
        let mut s = Self { b, centers, coefficients };
        let norm2 = s.norm_sqr();
        ensure(norm2 > 1e-24, || Error::InvalidParameter("state has zero norm".into()))?;
        let scale = 1.0 / norm2.sqrt();
        s.coefficients.iter_mut().for_each(|c| *c *= scale);
        Ok(s)
    }

    /// The ground Gaussian `g_B`.
    pub fn ground(b: f64) -> Result<Self> {
        Self::new(b, vec![[0.0, 0.0]], vec![Complex64::new(1.0, 0.0)])
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    fn norm_sqr(&self) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (ci, ai) in self.coefficients.iter().zip(&self.centers) {
            for (cj, aj) in self.coefficients.iter().zip(&self.centers) {
                acc += ci.conj() * cj * p0_kernel(*ai, *aj, self.b);
            }
        }
        acc.re * 2.0 * PI / self.b
    }

    pub fn value(&self, x: Point2) -> Complex64 {
        let s = (2.0 * PI / self.b).sqrt();
        self.coefficients.iter().zip(&self.centers).map(|(c, a)| c * p0_kernel(x, *a, self.b)).sum::<Complex64>() * s
    }
}

/// Outcome of one `‖I_k ψ‖ ≤ 2e^{|k|²/4B}‖ψ‖` check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBoundCheck {
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub quadrature_error: f64,
    pub passed: bool,
}

fn axis_rule(lo: f64, hi: f64, panel: f64, nodes: usize) -> GaussRule {
    let panels = ((hi - lo) / panel).ceil().max(1.0) as usize;
    let edges: Vec<f64> = (0..=panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64).collect();
    GaussRule::composite(nodes, &edges)
}

/// `(‖I_k ψ‖, ‖ψ‖)` with `ψ` sampled on the `source` box and the image on the `image` box.
fn apply_ik_norm(k: Point2, state: &LowestLevelState, source: [&GaussRule; 2], image: [&GaussRule; 2]) -> (f64, f64) {
    let b = state.b;
    let [s1, s2] = source;
    let (m1, m2) = (s1.nodes.len(), s2.nodes.len());
    let mut psi = Vec::with_capacity(m1 * m2);
    let mut psi_norm2 = 0.0;
    for (&y1, &w1) in s1.nodes.iter().zip(&s1.weights) {
        for (&y2, &w2) in s2.nodes.iter().zip(&s2.weights) {
            let v = state.value([y1, y2]);
            psi_norm2 += w1 * w2 * v.norm_sqr();
            psi.push(v);
        }
    }
    let amp = b / (2.0 * PI);
    let mut image_norm2 = 0.0;
    let mut ay = vec![Complex64::new(0.0, 0.0); m1];
    let mut by = vec![Complex64::new(0.0, 0.0); m2];
    for (&x1, &wx1) in image[0].nodes.iter().zip(&image[0].weights) {
        for (&x2, &wx2) in image[1].nodes.iter().zip(&image[1].weights) {
            // For fixed x the kernel factorizes into a y₁-part and a y₂-part.
            for ((a, &y), &w) in ay.iter_mut().zip(&s1.nodes).zip(&s1.weights) {
                let d = x1 - y;
                *a = Complex64::from_polar(
                    (-b * d * d / 4.0 - k[1] * d / 2.0).exp() * w,
                    -b * x2 * y / 2.0 + k[0] * (x1 + y) / 2.0,
                );
            }
            for ((c, &y), &w) in by.iter_mut().zip(&s2.nodes).zip(&s2.weights) {
                let d = x2 - y;
                *c = Complex64::from_polar(
                    (-b * d * d / 4.0 + k[0] * d / 2.0).exp() * w,
                    b * x1 * y / 2.0 + k[1] * (x2 + y) / 2.0,
                );
            }
            let acc: Complex64 = psi
                .chunks_exact(m2)
                .zip(&ay)
                .map(|(row, a)| a * row.iter().zip(&by).map(|(p, c)| p * c).sum::<Complex64>())
                .sum();
            image_norm2 += wx1 * wx2 * (acc * amp).norm_sqr();
        }
    }
    (image_norm2.sqrt(), psi_norm2.sqrt())
}

/// Checks the `I_k` norm bound on each state by quadrature application of the kernel.
pub fn i_kperp_norm_bound_check(
    k: Point2,
    b: f64,
    states: &[LowestLevelState],
) -> Result<Vec<NormBoundCheck>> {
    positive("B", b)?;
    let bound = ik_norm_bound(k, b);
    // The image of a state centred at c is centred at c + (-k₂, k₁)/B.
    let drift = [-k[1] / b, k[0] / b];
    let reach = 10.0 / b.sqrt();
    let panel = 2.5 / b.sqrt();
    states
        .iter()
        .map(|s| {
            ensure(s.b == b, || Error::InvalidParameter("state belongs to another field strength".into()))?;
            let lo = |i: usize| s.centers().iter().map(|c| c[i]).fold(f64::INFINITY, f64::min) - reach;
            let hi = |i: usize| s.centers().iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max) + reach;
            let ratio_at = |nodes: usize| {
                let src = [axis_rule(lo(0), hi(0), panel, nodes), axis_rule(lo(1), hi(1), panel, nodes)];
                let img = [
                    axis_rule(lo(0) + drift[0], hi(0) + drift[0], panel, nodes),
                    axis_rule(lo(1) + drift[1], hi(1) + drift[1], panel, nodes),
                ];
                let (im, norm) = apply_ik_norm(k, s, [&src[0], &src[1]], [&img[0], &img[1]]);
                im / norm
            };
            let coarse = ratio_at(10);
            let fine = ratio_at(14);
            let err = (fine - coarse).abs();
            ensure(err < 1e-6, || {
                Error::Quadrature(format!("I_k norm quadrature unresolved (change {err:.3e})"))
            })?;
            let margin = bound - fine;
            Ok(NormBoundCheck { ratio: fine, bound, margin, quadrature_error: err, passed: margin > err })
        })
        .collect()
}

/// `V_eff(z;B) = (√(πB)/2) erfcx(√B|z|/2)`: the Coulomb kernel averaged over two
/// lowest-Landau transverse densities.
pub fn effective_potential(z: f64, b: f64) -> f64 {
    0.5 * (PI * b).sqrt() * erfcx(0.5 * b.sqrt() * z.abs())
}

/// `U(k;B) = π e^{k²/B} E₁(k²/B)`; `∫ρρ V_eff = (1/π)∫|ρ̂|² U dk/(2π)·…`, see [`crate::coulomb`].
pub fn effective_potential_fourier(k: f64, b: f64) -> f64 {
    if k == 0.0 {
        return f64::INFINITY;
    }
    let x = k * k / b;
    if x == 0.0 || x < 1e-300 {
        PI * (b.ln() - 2.0 * k.abs().ln() - EULER_GAMMA)
    } else {
        PI * exp_e1(x)
    }
}

/// One-sided kernels `V(z)`, `z ≥ 0`, with a cusp at the origin.
pub trait LongitudinalKernel {
    fn value(&self, z: f64) -> f64;
    /// `dⁿV/dzⁿ` at `z = 0⁺`, for `n ≤ 7`.
    fn derivative_at_origin(&self, n: usize) -> f64;
    /// Inverse length on which the kernel varies near the origin.
    fn cusp_scale(&self) -> f64;
}

/// The Landau-Gaussian kernel [`effective_potential`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveKernel {
    pub b: f64,
}

impl LongitudinalKernel for EffectiveKernel {
    fn value(&self, z: f64) -> f64 {
        effective_potential(z, self.b)
    }

    fn derivative_at_origin(&self, n: usize) -> f64 {
        // erfcx⁽ⁿ⁾(0): y₀ = 1, y₁ = -2/√π, y_{n+1} = 2n y_{n-1}.
        let mut y = [0.0; 9];
        y[0] = 1.0;
        y[1] = -2.0 / PI.sqrt();
        for m in 1..8 {
            y[m + 1] = 2.0 * m as f64 * y[m - 1];
        }
        0.5 * (PI * self.b).sqrt() * (0.5 * self.b.sqrt()).powi(n as i32) * y[n]
    }

    fn cusp_scale(&self) -> f64 {
        0.5 * self.b.sqrt()
    }
}

/// Radially symmetric transverse density on a Gauss–Legendre radial rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTransverseDensity {
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl RadialTransverseDensity {
    /// Samples `ρ(r)` on `[0, 16/√B]`; requires `2π∫ρ r dr = 1`.
    pub fn from_fn(b: f64, rho: impl Fn(f64) -> f64) -> Result<Self> {
        positive("B", b)?;
        let r_max = 16.0 / b.sqrt();
        let edges: Vec<f64> = (0..=8).map(|i| r_max * i as f64 / 8.0).collect();
        let rule = GaussRule::composite(24, &edges);
        let values: Vec<f64> = rule.nodes.iter().map(|&r| rho(r)).collect();
        ensure(values.iter().all(|v| v.is_finite() && *v >= 0.0), || {
            Error::InvalidField("transverse density must be finite and nonnegative".into())
        })?;
        let s = Self { b, nodes: rule.nodes, weights: rule.weights, values };
        let norm = s.normalization();
        ensure((norm - 1.0).abs() < 1e-10, || {
            Error::InvalidField(format!("transverse density has 2π∫ρ r dr = {norm}, expected 1"))
        })?;
        Ok(s)
    }

    /// `|g_B|²`.
    pub fn ground(b: f64) -> Result<Self> {
        let g = TransverseGaussian::new(b)?;
        Self::from_fn(b, |r| g.density(r))
    }

    /// `|c₀ g_B + c₁ ψ₁|²` for real `c₀² + c₁² = 1`.
    pub fn mixture(b: f64, c0: f64, c1: f64) -> Result<Self> {
        let g = TransverseGaussian::new(b)?;
        Self::from_fn(b, |r| (c0 * g.density(r).sqrt() + c1 * first_excited_radial(b, r)).powi(2))
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn normalization(&self) -> f64 {
        2.0 * PI * self.nodes.iter().zip(&self.weights).zip(&self.values).map(|((r, w), v)| r * w * v).sum::<f64>()
    }

    /// Hankel transform `ρ̂(q) = 2π∫ρ(r)J₀(qr) r dr`.
    pub fn hankel(&self, q: f64) -> f64 {
        2.0 * PI
            * self
                .nodes
                .iter()
                .zip(&self.weights)
                .zip(&self.values)
                .map(|((r, w), v)| w * v * r * libm::j0(q * r))
                .sum::<f64>()
    }
}

/// Kernel `V(z) = ∫₀^∞ |ρ̂(q)|² e^{-q|z|} dq` for a radial transverse density,
/// tabulated on a geometric panel mesh resolving offsets down to `z_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseKernel {
    b: f64,
    q: Vec<f64>,
    weighted_power: Vec<f64>,
}

impl TransverseKernel {
    pub fn new(rho: &RadialTransverseDensity, z_min: f64) -> Result<Self> {
        positive("z_min", z_min)?;
        let b = rho.b();
        let q_max = 12.0 * b.sqrt();
        let mut edges = vec![0.0];
        let mut q = (b.sqrt().min(1.0 / z_min) / 8.0).min(q_max);
        while q < q_max {
            edges.push(q);
            q *= 2.0;
        }
        edges.push(q_max);
        let rule = GaussRule::composite(20, &edges);
        let weighted_power = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&q, &w)| w * rho.hankel(q).powi(2))
            .collect();
        Ok(Self { b, q: rule.nodes, weighted_power })
    }
}

impl LongitudinalKernel for TransverseKernel {
    fn value(&self, z: f64) -> f64 {
        let z = z.abs();
        self.q.iter().zip(&self.weighted_power).map(|(q, w)| w * (-q * z).exp()).sum()
    }

    fn derivative_at_origin(&self, n: usize) -> f64 {
        let s: f64 = self.q.iter().zip(&self.weighted_power).map(|(q, w)| w * q.powi(n as i32)).sum();
        if n.is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    fn cusp_scale(&self) -> f64 {
        0.5 * self.b.sqrt()
    }
}

/// Transverse-averaged Coulomb kernel at longitudinal offset `z`.
pub fn effective_potential_general(rho: &RadialTransverseDensity, z: f64) -> Result<f64> {
    let z_min = if z == 0.0 { 1.0 / rho.b().sqrt() } else { z.abs() };
    Ok(TransverseKernel::new(rho, z_min)?.value(z))
}
