//! Glocal constants, the Lambert-W choice of `δ` for logistic regression, and
//! iteration-complexity calculators.

mod bounds;
mod delta;
mod lambert;

pub use bounds::{complexity_bound, BoundInputs, ComplexityBound, Exactness, Theorem, DEFAULT_ZETA, SYMBOLS};
pub use delta::{logistic_h, logistic_h_derivative, optimal_delta_logistic, DeltaCase, OptimalDelta};
pub use lambert::lambert_w0;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::gram_lambda_max;
use crate::problems::QuadraticProblem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlocalFlavor {
    /// Local region `{w : f(w) − f* ≤ δ}`.
    FunctionValues,
    /// Local region `{w : ‖w − w*‖² ≤ δ}`.
    Iterates,
    /// Coordinate-wise smoothness on `{w : f(w) − f* ≤ δ}`.
    CoordinateWise,
}

/// `(L, L*, δ)`: global smoothness `l`, local smoothness `l_star` valid on the
/// region selected by `flavor` and `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlocalProfile {
    pub l: f64,
    pub l_star: f64,
    pub delta: f64,
    pub flavor: GlocalFlavor,
}

/// Local smoothness of logistic regression as a function of `δ`:
/// `L*(δ) = min((ℓ* + δ)·λ_max(XᵀX), ¼λ_max(XᵀX))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticGlocal {
    pub gram_lambda_max: f64,
    pub ell_star: f64,
}

impl LogisticGlocal {
    pub fn new(x: &DMatrix<f64>, ell_star: f64) -> Result<Self> {
        if !(ell_star >= 0.0 && ell_star.is_finite()) {
            return Err(Error::input("ℓ* must be finite and ≥ 0"));
        }
        Ok(Self { gram_lambda_max: gram_lambda_max(x), ell_star })
    }

    pub fn l(&self) -> f64 {
        0.25 * self.gram_lambda_max
    }

    pub fn l_star(&self, delta: f64) -> f64 {
        ((self.ell_star + delta) * self.gram_lambda_max).min(self.l())
    }

    pub fn profile(&self, delta: f64) -> GlocalProfile {
        GlocalProfile {
            l: self.l(),
            l_star: self.l_star(delta),
            delta,
            flavor: GlocalFlavor::FunctionValues,
        }
    }
}

/// Glocal profile of the (unregularized) logistic loss on data `x`.
pub fn logistic_glocal(x: &DMatrix<f64>, ell_star: f64, delta: f64) -> Result<GlocalProfile> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::input("δ must be positive"));
    }
    Ok(LogisticGlocal::new(x, ell_star)?.profile(delta))
}

/// Both sides of the GD(LO)-versus-NAG(1/L) comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSearchVsAcceleration {
    /// `L*/L`
    pub lhs: f64,
    /// `(κ^{-1/2} ln(Δ₀/ε) − ln(Δ₀/δ)) / ln(δ/ε)`
    pub rhs: f64,
    /// `lhs < rhs`
    pub gdlo_faster: bool,
}

/// Compares the glocal GD(LO) rate with NAG using a fixed `1/L` step.
///
/// How much smaller `lhs` must be than `rhs` to be meaningful is left to the
/// caller; `gdlo_faster` is the plain strict comparison.
pub fn gdlo_vs_nag(l: f64, l_star: f64, mu: f64, delta0: f64, delta: f64, eps: f64) -> Result<LineSearchVsAcceleration> {
    for (name, v) in [("L", l), ("L*", l_star), ("μ", mu), ("Δ₀", delta0), ("δ", delta), ("ε", eps)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::input(format!("{name} must be positive and finite")));
        }
    }
    if !(delta0 > delta && delta > eps) {
        return Err(Error::input("need Δ₀ > δ > ε"));
    }
    let kappa = l / mu;
    let lhs = l_star / l;
    let rhs = ((delta0 / eps).ln() / kappa.sqrt() - (delta0 / delta).ln()) / (delta / eps).ln();
    Ok(LineSearchVsAcceleration { lhs, rhs, gdlo_faster: lhs < rhs })
}

/// `R²(ρ)` for a positive definite quadratic: the squared radius of the
/// sublevel set `{f ≤ ρ}` around `w*`, `2(ρ − f*)/λ_min(A)`.
pub fn r2_quadratic(problem: &QuadraticProblem, rho: f64) -> Result<f64> {
    use crate::problems::Objective;
    let f_star = problem.constants().f_star.ok_or_else(|| {
        Error::Unsupported("singular Hessian: sublevel sets are unbounded (R² = ∞)".into())
    })?;
    let lmin = problem.lambda_min();
    if lmin <= 0.0 {
        return Err(Error::Unsupported(
            "singular Hessian: sublevel sets are unbounded (R² = ∞)".into(),
        ));
    }
    if rho < f_star {
        return Err(Error::input(format!("ρ = {rho} is below f* = {f_star}")));
    }
    Ok(2.0 * (rho - f_star) / lmin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_profile_identity() {
        let x = DMatrix::<f64>::identity(2, 2);
        let p = logistic_glocal(&x, 0.0, 0.1).unwrap();
        assert!((p.l - 0.25).abs() < 1e-12);
        assert!((p.l_star - 0.1).abs() < 1e-12);
        let big = logistic_glocal(&x, 0.0, 100.0).unwrap();
        assert!((big.l_star - 0.25).abs() < 1e-12);
    }

    #[test]
    fn r2_examples() {
        let id = QuadraticProblem::diagonal(&[1.0, 1.0]).unwrap();
        assert!((r2_quadratic(&id, 2.0).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(r2_quadratic(&id, 0.0).unwrap(), 0.0);
        let q = QuadraticProblem::diagonal(&[1.0, 1.0 / 20.0]).unwrap();
        assert!((r2_quadratic(&q, 1.0).unwrap() - 40.0).abs() < 1e-9);
        let singular = QuadraticProblem::diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(r2_quadratic(&singular, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn comparison_limits() {
        // δ → Δ₀ reduces the condition to L* < √(Lμ).
        let (l, mu, d0, eps): (f64, f64, f64, f64) = (100.0, 1.0, 1.0, 1e-6);
        let delta = d0 * (1.0 - 1e-9);
        let root = (l * mu).sqrt();
        assert!(gdlo_vs_nag(l, 0.9 * root, mu, d0, delta, eps).unwrap().gdlo_faster);
        assert!(!gdlo_vs_nag(l, 1.1 * root, mu, d0, delta, eps).unwrap().gdlo_faster);
        // L* = L with large κ: NAG wins.
        assert!(!gdlo_vs_nag(1e6, 1e6, 1.0, 1.0, 0.5, 1e-6).unwrap().gdlo_faster);
        assert!(gdlo_vs_nag(l, l, mu, 1.0, 2.0, eps).is_err());
    }

    #[test]
    fn comparison_evaluated() {
        let r = gdlo_vs_nag(100.0, 5.0, 1.0, 1.0, 0.5, 1e-6).unwrap();
        let expected_rhs = (0.1 * (1e6f64).ln() - 2f64.ln()) / (5e5f64).ln();
        assert!((r.lhs - 0.05).abs() < 1e-15);
        assert!((r.rhs - expected_rhs).abs() < 1e-14);
        assert!(r.gdlo_faster);
    }
}
