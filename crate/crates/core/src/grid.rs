//! Uniform periodic grids, sampled fields and their spectral functionals.

use crate::error::{ensure, Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Relative size a field may keep at the box edge.
pub const DECAY_TOLERANCE: f64 = 1e-8;

/// Uniform grid `t_j = -T + j·h`, `h = 2T/n`, on a periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    n: usize,
    half_width: f64,
}

impl Grid1D {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        ensure(n >= 64 && n.is_power_of_two(), || {
            Error::InvalidGrid(format!("n must be a power of two >= 64, got {n}"))
        })?;
        ensure(half_width.is_finite() && half_width > 0.0, || {
            Error::InvalidGrid(format!("half width must be finite and > 0, got {half_width}"))
        })?;
        Ok(Self { n, half_width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Spacing of the dual (wavenumber) grid.
    pub fn dual_spacing(&self) -> f64 {
        PI / self.half_width
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Wavenumber of DFT bin `m` (FFT ordering, Nyquist bin negative).
    pub fn wavenumber(&self, m: usize) -> f64 {
        let s = if m < self.n / 2 { m as f64 } else { m as f64 - self.n as f64 };
        s * self.dual_spacing()
    }

    /// Same grid with the box scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.half_width * factor)
    }
}

/// Real samples of a longitudinal wavefunction on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field1D {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field1D {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        ensure(values.len() == grid.n(), || {
            Error::InvalidField(format!("{} samples for a grid of {}", values.len(), grid.n()))
        })?;
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidField(format!("sample {j} is not finite")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![0.0; grid.n()] }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Checks that the field has decayed at the box edge.
    pub fn check_decay(&self) -> Result<()> {
        let edge = self.values[0].abs().max(self.values[self.grid.n() - 1].abs());
        let peak = self.max_abs();
        ensure(edge <= DECAY_TOLERANCE * peak, || {
            Error::DomainTooSmall(format!(
                "edge value {edge:.3e} exceeds {DECAY_TOLERANCE:e} of the peak {peak:.3e} (T = {})",
                self.grid.half_width()
            ))
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| c * v).collect() }
    }

    /// Density centroid `∫t f² / ∫f²`.
    pub fn centroid(&self) -> f64 {
        let m: f64 = self.values.iter().map(|v| v * v).sum();
        if m == 0.0 {
            return 0.0;
        }
        let g = &self.grid;
        self.values.iter().enumerate().map(|(j, v)| g.point(j) * v * v).sum::<f64>() / m
    }

    /// Translate by `s` through the trigonometric interpolant: result(t) = f(t - s).
    pub fn translated(&self, s: f64) -> Self {
        let spec = Spectral::new(self.grid);
        Self { grid: self.grid, values: spec.translate(&self.values, s) }
    }

    /// Periodic shift of the samples by `k` positions.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.values.clone();
        v.rotate_right(k % self.grid.n());
        Self { grid: self.grid, values: v }
    }
}

/// Nonnegative density samples `ρ(t_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    grid: Grid1D,
    values: Vec<f64>,
}

impl DensityProfile {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        ensure(values.len() == grid.n(), || {
            Error::InvalidField(format!("{} samples for a grid of {}", values.len(), grid.n()))
        })?;
        if let Some(j) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidField(format!(
                "density sample {j} = {} is not finite and nonnegative",
                values[j]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_field(f: &Field1D) -> Self {
        Self { grid: f.grid, values: f.values.iter().map(|v| v * v).collect() }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    /// `ρ̂(k) = ∫ e^{-ikt} ρ(t) dt` at an arbitrary wavenumber, by direct summation.
    pub fn fourier_at(&self, k: f64) -> Complex64 {
        let h = self.grid.spacing();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &r) in self.values.iter().enumerate() {
            if r != 0.0 {
                let (s, c) = (k * self.grid.point(j)).sin_cos();
                acc += Complex64::new(r * c, -r * s);
            }
        }
        acc * h
    }
}

/// Continuum Fourier transform of a density sampled on the dual grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpectrum {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl DensitySpectrum {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn wavenumber(&self, m: usize) -> f64 {
        self.grid.wavenumber(m)
    }

    pub fn dual_spacing(&self) -> f64 {
        self.grid.dual_spacing()
    }

    /// Riemann sum of `∫ w(k)|ρ̂(k)|² dk` over the dual grid.
    pub fn weighted_power(&self, w: impl Fn(f64) -> f64) -> f64 {
        let dk = self.dual_spacing();
        self.values
            .iter()
            .enumerate()
            .map(|(m, v)| w(self.wavenumber(m)) * v.norm_sqr())
            .sum::<f64>()
            * dk
    }
}

/// Cached FFT plans and wavenumbers for one grid.
#[derive(Clone)]
pub(crate) struct Spectral {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl Spectral {
    pub(crate) fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        let k = (0..n)
            .map(|m| if m == n / 2 { (n / 2) as f64 * grid.dual_spacing() } else { grid.wavenumber(m) })
            .collect();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k,
        }
    }

    pub(crate) fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub(crate) fn forward(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform including the 1/n normalization; keeps the real part.
    pub(crate) fn inverse_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut buf);
        let s = 1.0 / self.grid.n() as f64;
        buf.iter().map(|c| c.re * s).collect()
    }

    /// `h/n Σ k^{2p} |F_m|²` = ∫ |f^{(p)}|².
    pub(crate) fn derivative_power(&self, v: &[f64], p: i32) -> f64 {
        let f = self.forward(v);
        let s = self.grid.spacing() / self.grid.n() as f64;
        f.iter().zip(&self.k).map(|(c, k)| k.powi(2 * p) * c.norm_sqr()).sum::<f64>() * s
    }

    pub(crate) fn second_derivative(&self, v: &[f64]) -> Vec<f64> {
        let mut f = self.forward(v);
        for (c, k) in f.iter_mut().zip(&self.k) {
            *c *= -k * k;
        }
        self.inverse_real(f)
    }

    /// Samples of `t ↦ f(t - s)` from the trigonometric interpolant.
    pub(crate) fn translate(&self, v: &[f64], s: f64) -> Vec<f64> {
        let n = self.grid.n();
        let mut f = self.forward(v);
        for (m, c) in f.iter_mut().enumerate() {
            if m == n / 2 {
                *c *= (self.k[m] * s).cos();
            } else {
                let (sn, cs) = (self.k[m] * s).sin_cos();
                *c *= Complex64::new(cs, -sn);
            }
        }
        self.inverse_real(f)
    }

    pub(crate) fn grid(&self) -> &Grid1D {
        &self.grid
    }
}

/// `∫ f²`.
pub fn mass(f: &Field1D) -> f64 {
    f.grid.spacing() * f.values.iter().map(|v| v * v).sum::<f64>()
}

/// `∫ |f'|²` by Fourier multiplier; requires a decayed field.
pub fn kinetic(f: &Field1D) -> Result<f64> {
    f.check_decay()?;
    Ok(Spectral::new(f.grid).derivative_power(&f.values, 1))
}

/// `∫ f⁴`.
pub fn quartic(f: &Field1D) -> f64 {
    f.grid.spacing() * f.values.iter().map(|v| v.powi(4)).sum::<f64>()
}

/// `∫ |f|^q`.
pub fn lq_power(f: &Field1D, q: f64) -> f64 {
    f.grid.spacing() * f.values.iter().map(|v| v.abs().powf(q)).sum::<f64>()
}

/// Continuum transform `ρ̂(k_m) = h Σ_j e^{-i k_m t_j} ρ_j` on the dual grid (FFT ordering).
pub fn density_fourier(rho: &DensityProfile) -> DensitySpectrum {
    let g = rho.grid;
    let spec = Spectral::new(g);
    let h = g.spacing();
    let mut values = spec.forward(&rho.values);
    for (m, c) in values.iter_mut().enumerate() {
        *c *= if m % 2 == 0 { h } else { -h };
    }
    DensitySpectrum { grid: g, values }
}
