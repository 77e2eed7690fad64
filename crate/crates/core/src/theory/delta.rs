use serde::Serialize;

use super::lambert_w0;
use crate::{Error, Result};

/// Which regime of the `δ` minimization applies, keyed by `ξ = ¼ − ℓ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaCase {
    /// `ξ ≤ ε`: splitting the run buys nothing, `δ* = ε`.
    Case1,
    /// `ξ ≥ Δ₀ ln(Δ₀e/ε)`: the whole run is local, `δ* = Δ₀`.
    Case2,
    /// Interior optimum through the Lambert W function.
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalDelta {
    pub delta: f64,
    pub case: DeltaCase,
    pub xi: f64,
    /// `W₀(ξe/ε)`, only defined for the interior case.
    pub omega: Option<f64>,
    /// Closed-form minimum of [`logistic_h`] for the selected case.
    pub h_min: f64,
}

/// `h(δ) = ¼ ln(Δ₀/δ) + (ℓ* + δ) ln(δ/ε)`, the GD(LO) iteration bound for
/// logistic regression in units of `λ_max(XᵀX)/μ`.
pub fn logistic_h(delta0: f64, eps: f64, ell_star: f64, delta: f64) -> f64 {
    0.25 * (delta0 / delta).ln() + (ell_star + delta) * (delta / eps).ln()
}

/// `h'(δ) = ln(δe/ε) − ξ/δ`.
pub fn logistic_h_derivative(eps: f64, ell_star: f64, delta: f64) -> f64 {
    let xi = 0.25 - ell_star;
    (delta / eps).ln() + 1.0 - xi / delta
}

/// The `δ ∈ [ε, Δ₀]` minimizing [`logistic_h`].
pub fn optimal_delta_logistic(delta0: f64, eps: f64, ell_star: f64) -> Result<OptimalDelta> {
    if !(eps > 0.0 && delta0 > eps && delta0.is_finite()) {
        return Err(Error::input(format!("need Δ₀ > ε > 0, got Δ₀ = {delta0}, ε = {eps}")));
    }
    if !(ell_star >= 0.0 && ell_star.is_finite()) {
        return Err(Error::input(format!("ℓ* must be finite and ≥ 0, got {ell_star}")));
    }
    let xi = 0.25 - ell_star;
    let log_ratio = (delta0 / eps).ln();
    if xi <= eps {
        return Ok(OptimalDelta { delta: eps, case: DeltaCase::Case1, xi, omega: None, h_min: 0.25 * log_ratio });
    }
    if xi >= delta0 * (log_ratio + 1.0) {
        return Ok(OptimalDelta {
            delta: delta0,
            case: DeltaCase::Case2,
            xi,
            omega: None,
            h_min: (ell_star + delta0) * log_ratio,
        });
    }
    let omega = lambert_w0(xi * std::f64::consts::E / eps)?;
    let by_ratio = xi / omega;
    let by_exp = eps * (omega - 1.0).exp();
    if (by_ratio - by_exp).abs() > 1e-10 * by_ratio.abs().max(by_exp.abs()) {
        return Err(Error::Numerical(format!(
            "δ* forms disagree: ξ/ω = {by_ratio}, (ε/e)e^ω = {by_exp}"
        )));
    }
    let h_min = 0.25 * log_ratio - by_ratio * (omega - 1.0).powi(2);
    Ok(OptimalDelta { delta: by_ratio, case: DeltaCase::Case3, xi, omega: Some(omega), h_min })
}
