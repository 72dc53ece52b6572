//! Normalized gradient flow on the mass sphere for functionals
//! `E[f] = κ∫|f'|² - N[f²]` with `N` quadratic in the density.

use crate::error::{Error, Result};
use crate::grid::Spectral;
use num_complex::Complex64;

/// Attractive quadratic density functional `N[ρ] = ½∫ρΦ[ρ]`.
pub(crate) trait Attraction {
    /// Returns `Φ = δN/δρ` on the grid.
    fn potential(&mut self, rho: &[f64]) -> Vec<f64>;
}

/// Local quartic interaction `N[ρ] = b∫ρ²`.
pub(crate) struct Local(pub f64);

impl Attraction for Local {
    fn potential(&mut self, rho: &[f64]) -> Vec<f64> {
        rho.iter().map(|r| 2.0 * self.0 * r).collect()
    }
}

/// Fourier-multiplier interaction `N[ρ] = λ Σ_m dk W_m |ρ̂_m|²`.
pub(crate) struct Multiplier {
    pub spectral: Spectral,
    /// `4πλ W_m`, FFT ordering.
    pub scaled_weights: Vec<f64>,
}

impl Attraction for Multiplier {
    fn potential(&mut self, rho: &[f64]) -> Vec<f64> {
        let mut f = self.spectral.forward(rho);
        for (c, w) in f.iter_mut().zip(&self.scaled_weights) {
            *c *= *w;
        }
        self.spectral.inverse_real(f)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct FlowSettings {
    pub tol: f64,
    pub residual_tol: f64,
    pub max_iterations: usize,
    pub recenter_every: usize,
    pub energy_floor: f64,
}

impl FlowSettings {
    pub(crate) fn new(tol: f64) -> Self {
        Self {
            tol,
            residual_tol: tol.sqrt(),
            max_iterations: 50_000,
            recenter_every: 50,
            energy_floor: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct FlowOutcome {
    pub values: Vec<f64>,
    pub energy: f64,
    pub kinetic: f64,
    pub interaction: f64,
    pub iterations: usize,
    pub residual: f64,
}

struct State {
    f: Vec<f64>,
    kinetic: f64,
    interaction: f64,
    phi: Vec<f64>,
}

impl State {
    fn energy(&self, kappa: f64) -> f64 {
        kappa * self.kinetic - self.interaction
    }
}

fn evaluate(spec: &Spectral, attraction: &mut impl Attraction, f: Vec<f64>) -> State {
    let h = spec.grid().spacing();
    let kinetic = spec.derivative_power(&f, 1);
    let rho: Vec<f64> = f.iter().map(|v| v * v).collect();
    let phi = attraction.potential(&rho);
    let interaction = 0.5 * h * rho.iter().zip(&phi).map(|(r, p)| r * p).sum::<f64>();
    State { f, kinetic, interaction, phi }
}

fn normalize(f: &mut [f64], h: f64, mass: f64) {
    let m = h * f.iter().map(|v| v * v).sum::<f64>();
    let s = (mass / m).sqrt();
    f.iter_mut().for_each(|v| *v *= s);
}

fn centroid(f: &[f64], spec: &Spectral) -> f64 {
    let g = spec.grid();
    let m: f64 = f.iter().map(|v| v * v).sum();
    f.iter().enumerate().map(|(j, v)| g.point(j) * v * v).sum::<f64>() / m
}

/// Minimizes `κ∫|f'|² - N[f²]` over fields with `∫f² = mass`.
pub(crate) fn minimize(
    spec: &Spectral,
    kappa: f64,
    mass: f64,
    attraction: &mut impl Attraction,
    initial: Vec<f64>,
    settings: FlowSettings,
) -> Result<FlowOutcome> {
    let h = spec.grid().spacing();
    let k = spec.wavenumbers().to_vec();
    let mut f = initial;
    normalize(&mut f, h, mass);
    let mut state = evaluate(spec, attraction, f);
    let mut energy = state.energy(kappa);
    let mut tau = 1.0;
    let mut residual = f64::INFINITY;
    let mut last_change = f64::INFINITY;

    for it in 0..settings.max_iterations {
        if energy < settings.energy_floor {
            return Err(Error::UnboundedBelow(format!(
                "energy {energy:.6e} fell below the stability floor {:.6e}",
                settings.energy_floor
            )));
        }
        let second = spec.second_derivative(&state.f);
        let mu = (kappa * state.kinetic - 2.0 * state.interaction) / mass;
        let r: Vec<f64> = state
            .f
            .iter()
            .zip(&second)
            .zip(&state.phi)
            .map(|((f, d2), p)| -kappa * d2 - p * f - mu * f)
            .collect();
        let scale = mu.abs().max(f64::MIN_POSITIVE);
        residual = (h * r.iter().map(|v| v * v).sum::<f64>() / mass).sqrt() / scale;
        if it > 0 && last_change < settings.tol && residual < settings.residual_tol {
            return Ok(FlowOutcome {
                energy,
                kinetic: state.kinetic,
                interaction: state.interaction,
                values: state.f,
                iterations: it,
                residual,
            });
        }

        let shift = (-mu).max(0.0);
        let r_hat = spec.forward(&r);
        let tau_max = 1e4 / scale;
        let mut accepted = false;
        for _ in 0..60 {
            let step: Vec<Complex64> = r_hat
                .iter()
                .zip(&k)
                .map(|(c, km)| c / (1.0 + tau * (kappa * km * km + shift)))
                .collect();
            let d = spec.inverse_real(step);
            let mut trial: Vec<f64> = state.f.iter().zip(&d).map(|(f, d)| f - tau * d).collect();
            normalize(&mut trial, h, mass);
            let candidate = evaluate(spec, attraction, trial);
            let e_new = candidate.energy(kappa);
            if e_new <= energy + 4.0 * f64::EPSILON * energy.abs() {
                last_change = (energy - e_new).abs() / energy.abs().max(f64::MIN_POSITIVE);
                energy = e_new;
                state = candidate;
                tau = (tau * 1.5).min(tau_max);
                accepted = true;
                break;
            }
            tau *= 0.25;
        }
        if !accepted {
            // No descent direction left at working precision.
            last_change = 0.0;
        }
        if settings.recenter_every > 0 && (it + 1) % settings.recenter_every == 0 {
            let c = centroid(&state.f, spec);
            if c.abs() > 1e-3 * h {
                let f = spec.translate(&state.f, -c);
                state = evaluate(spec, attraction, f);
                energy = state.energy(kappa);
            }
        }
        if !accepted && residual >= settings.residual_tol {
            return Err(Error::NotConverged { iterations: it + 1, residual, energy });
        }
    }
    Err(Error::NotConverged { iterations: settings.max_iterations, residual, energy })
}
