//! Cavity excitation amplitude for a single cavity mode damped by a reservoir
//! with a Lorentzian spectral density.
//!
//! All times are expressed in the dimensionless form `gamma0 * t`. With
//! `x = gamma / gamma0` the amplitude of the initially excited cavity state is
//!
//! ```text
//! C0(τ) = exp(-x τ / 2) [ cos(s τ / 2) + (x / s) sin(s τ / 2) ],   s = sqrt(x (2 - x))
//! ```
//!
//! for `x < 2`. For `x > 2` the same expression is continued analytically
//! (`cos -> cosh`, `sin -> sinh`, `s = sqrt(x (x - 2))`) and at `x = 2` the
//! closed-form limit `exp(-τ) (1 + τ)` is used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Memory regime selected by the ratio `x = gamma / gamma0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NonMarkovian,
    Critical,
    Markovian,
}

/// Lorentzian damping model `(gamma0, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeModel {
    gamma0: f64,
    x: f64,
}

/// Bisection tolerance for roots of `C0`, in units of `gamma0 * t`.
pub const ROOT_TOLERANCE: f64 = 1e-10;

impl AmplitudeModel {
    pub fn new(gamma0: f64, x: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma0 must be positive and finite, got {gamma0}"
            )));
        }
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "x = gamma/gamma0 must be positive and finite, got {x}"
            )));
        }
        Ok(Self { gamma0, x })
    }

    /// Model with `gamma0 = 1`, so that times are directly `gamma0 * t`.
    pub fn with_ratio(x: f64) -> Result<Self> {
        Self::new(1.0, x)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn regime(&self) -> Regime {
        if self.x < 2.0 {
            Regime::NonMarkovian
        } else if self.x > 2.0 {
            Regime::Markovian
        } else {
            Regime::Critical
        }
    }

    /// `C0` at physical time `t`.
    pub fn c0(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(c0_scaled(self.x, self.gamma0 * t))
    }

    /// `C = sqrt(1 - C0^2)`, the amplitude of the reservoir excitation.
    pub fn c_excitation(&self, t: f64) -> Result<f64> {
        let c0 = self.c0(t)?;
        excitation_from_c0(c0)
    }

    /// Both amplitudes at once, `(C0, C)`.
    pub fn amplitudes(&self, t: f64) -> Result<(f64, f64)> {
        let c0 = self.c0(t)?;
        Ok((c0, excitation_from_c0(c0)?))
    }

    /// First sign change of `C0` in `(0, tau_max]`, located by bracketing
    /// bisection in `gamma0 * t`. `None` when no sign change is bracketed
    /// on the scan grid.
    pub fn first_root(&self, tau_max: f64) -> Option<f64> {
        if !(tau_max.is_finite() && tau_max > 0.0) {
            return None;
        }
        let scan = 4096usize;
        let h = tau_max / scan as f64;
        let f = |tau: f64| c0_scaled(self.x, tau);
        let mut lo = 0.0;
        let mut f_lo = f(lo);
        for k in 1..=scan {
            let hi = k as f64 * h;
            let f_hi = f(hi);
            if f_hi == 0.0 {
                return Some(hi);
            }
            if f_lo.signum() != f_hi.signum() {
                return Some(bisect(f, lo, hi, ROOT_TOLERANCE));
            }
            lo = hi;
            f_lo = f_hi;
        }
        None
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

/// `C0` as a function of the dimensionless time `tau = gamma0 * t`.
pub fn c0_scaled(x: f64, tau: f64) -> f64 {
    let envelope = (-x * tau / 2.0).exp();
    if x < 2.0 {
        let s = (x * (2.0 - x)).sqrt();
        let phase = s * tau / 2.0;
        envelope * (phase.cos() + x / s * phase.sin())
    } else if x > 2.0 {
        let s = (x * (x - 2.0)).sqrt();
        let phase = s * tau / 2.0;
        // cosh/sinh grow like exp(phase); fold them into the envelope so that
        // large tau does not overflow before the product decays.
        let grow = (-x * tau / 2.0 + phase).exp();
        let shrink = (-x * tau / 2.0 - phase).exp();
        let cosh = 0.5 * (grow + shrink);
        let sinh = 0.5 * (grow - shrink);
        cosh + x / s * sinh
    } else {
        envelope * (1.0 + tau)
    }
}

fn excitation_from_c0(c0: f64) -> Result<f64> {
    let radicand = 1.0 - c0 * c0;
    if radicand < -1e-12 {
        return Err(Error::Numerical(format!(
            "|C0| = {} exceeds one; amplitude evaluation is broken",
            c0.abs()
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
