//! Scaled complementary error function, exponential integrals and a few
//! closed-form helpers used across the crate.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const TINY: f64 = 1e-300;
const CF_EPS: f64 = 1e-16;
const CF_MAX_TERMS: usize = 10_000;

/// Scaled complementary error function `exp(x²)·erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 8.0 {
        if x < -26.0 {
            return f64::INFINITY;
        }
        return (x * x).exp() * libm::erfc(x);
    }
    // Laplace continued fraction: √π·erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for i in 1..CF_MAX_TERMS {
        let a = i as f64 * 0.5;
        d = x + a * d;
        d = if d.abs() < TINY { 1.0 / TINY } else { 1.0 / d };
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..200 {
        let nf = n as f64;
        term *= -x / nf;
        let add = -term / nf;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// `exp(x)·E₁(x)` by the Legendre continued fraction, valid for `x ≥ 1`.
fn exp_e1_fraction(x: f64) -> f64 {
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_TERMS {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Exponential integral `E₁(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub fn e1(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 1.0 {
        e1_series(x)
    } else {
        exp_e1_fraction(x) * (-x).exp()
    }
}

/// Scaled exponential integral `exp(x)·E₁(x)` for `x ≥ 0`; overflow free for large x.
pub fn exp_e1(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        exp_e1_fraction(x)
    }
}

/// Generalized exponential integral `E_n(z)` for complex `z` with `|z| ≥ 1`
/// away from the negative real axis, by continued fraction.
pub fn expint_n_complex(n: u32, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let nm1 = f64::from(n) - 1.0;
    let mut b = z + f64::from(n);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..CF_MAX_TERMS {
        let fi = i as f64;
        let an = -fi * (nm1 + fi);
        b += 2.0;
        d = one / (d * an + b);
        c = b + c.inv() * an;
        let delta = c * d;
        h *= delta;
        if (delta - one).norm() < CF_EPS {
            break;
        }
    }
    h * (-z).exp()
}

/// Gamma function.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `∫_ℝ sech^m(t) dt = √π Γ(m/2)/Γ((m+1)/2)`.
pub fn sech_power_integral(m: f64) -> f64 {
    PI.sqrt() * (libm::lgamma(m / 2.0) - libm::lgamma((m + 1.0) / 2.0)).exp()
}
