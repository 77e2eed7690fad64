//! Closed-form step-size rules that need no extra function evaluations.

use crate::linalg::{all_finite, norm, sub};
use crate::{Error, Result};

/// `1/L`.
pub fn fixed_step(l: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::input(format!("fixed step needs L > 0, got {l}")));
    }
    Ok(1.0 / l)
}

/// Relative slack below `f*` tolerated before [`polyak_step`] reports an
/// inconsistent optimal value. Iterates at the optimum can land a few ulps
/// under a computed `f*`.
pub const POLYAK_SLACK: f64 = 1e-12;

/// `(f(w) − f*) / ‖∇f(w)‖²`.
pub fn polyak_step(f_w: f64, f_star: f64, grad_sq: f64) -> Result<f64> {
    if !(f_w.is_finite() && f_star.is_finite() && grad_sq.is_finite() && grad_sq >= 0.0) {
        return Err(Error::input("Polyak step needs finite f(w), f* and ‖g‖²"));
    }
    if grad_sq == 0.0 {
        return Err(Error::Stationary);
    }
    if f_w < f_star - POLYAK_SLACK * (1.0 + f_star.abs()) {
        return Err(Error::InconsistentOptimum { f_w, f_star });
    }
    Ok((f_w - f_star).max(0.0) / grad_sq)
}

/// Memory of the adaptive (AdGD) rule between iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct AdgdState {
    pub eta_prev: f64,
    /// `η_{t−1}/η_{t−2}`; `+∞` before the first update, which disables the
    /// growth term once.
    pub theta_prev: f64,
    pub w_prev: Vec<f64>,
    pub g_prev: Vec<f64>,
}

/// First step size of an AdGD run, deliberately tiny.
pub const ADGD_ETA0: f64 = 1e-10;

impl AdgdState {
    /// State after the first move `w₁ = w₀ − η₀ g₀`.
    pub fn start(eta0: f64, w0: Vec<f64>, g0: Vec<f64>) -> Result<Self> {
        if !(eta0 > 0.0 && eta0.is_finite()) {
            return Err(Error::input("AdGD η₀ must be positive"));
        }
        if !(all_finite(&w0) && all_finite(&g0)) {
            return Err(Error::input("AdGD start has non-finite entries"));
        }
        Ok(Self { eta_prev: eta0, theta_prev: f64::INFINITY, w_prev: w0, g_prev: g0 })
    }
}

/// `η_t = min(√(1 + θ_{t−1}/2)·η_{t−1}, ‖w_t − w_{t−1}‖ / (2‖g_t − g_{t−1}‖))`.
///
/// A term that evaluates to `+∞` is inactive; if both are, there is no
/// information to pick a step from and the call fails.
pub fn adgd_step(state: &AdgdState, w: &[f64], g: &[f64]) -> Result<(f64, AdgdState)> {
    if !(all_finite(w) && all_finite(g)) {
        return Err(Error::input("AdGD inputs have non-finite entries"));
    }
    if w.len() != state.w_prev.len() || g.len() != state.g_prev.len() {
        return Err(Error::input("AdGD inputs have the wrong dimension"));
    }
    let growth = (1.0 + state.theta_prev / 2.0).sqrt() * state.eta_prev;
    let dg = norm(&sub(g, &state.g_prev));
    let curvature = if dg == 0.0 {
        f64::INFINITY
    } else {
        norm(&sub(w, &state.w_prev)) / (2.0 * dg)
    };
    let eta = growth.min(curvature);
    if !eta.is_finite() {
        return Err(Error::input(
            "AdGD step undetermined: growth term inactive and gradients unchanged",
        ));
    }
    if eta <= 0.0 {
        return Err(Error::Stationary);
    }
    let next = AdgdState {
        eta_prev: eta,
        theta_prev: eta / state.eta_prev,
        w_prev: w.to_vec(),
        g_prev: g.to_vec(),
    };
    Ok((eta, next))
}
