//! Objective functions and datasets.
//!
//! [`Objective`] is the unchecked capability trait implemented by every
//! problem. The free functions [`eval`], [`grad`], [`coord_partial`] and
//! [`component_grad`] validate their inputs before dispatching and are what
//! the rest of the crate calls.

mod dataset;
mod huber;
mod least_squares;
mod logistic;
mod quadratic;
mod two_regime;

pub use dataset::{gen_realizable_ls, gen_separable_logistic, parse_libsvm, parse_libsvm_with, write_libsvm, Dataset, LibsvmOptions};
pub use huber::HuberProblem;
pub use least_squares::LeastSquaresProblem;
pub use logistic::{log1p_exp, LogisticProblem};
pub use quadratic::QuadraticProblem;
pub use two_regime::{Regime, TwoRegimeProblem};

use crate::linalg::{all_finite, norm};
use crate::{Error, Result};

/// Constants known analytically (or computed exactly) for a problem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnownConstants {
    /// Global Lipschitz constant of the gradient.
    pub l_global: Option<f64>,
    /// Strong-convexity constant.
    pub mu: Option<f64>,
    pub f_star: Option<f64>,
    pub w_star: Option<Vec<f64>>,
}

/// A differentiable objective `f: R^d -> R`, optionally a finite sum
/// `f = Σ_i f_i`.
///
/// Implementations are immutable after construction; evaluation never
/// mutates shared state, so objectives can be evaluated from several threads.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, w: &[f64]) -> f64;

    fn gradient(&self, w: &[f64]) -> Vec<f64>;

    /// `∂f/∂w_j`. The default computes the full gradient.
    fn partial(&self, w: &[f64], j: usize) -> f64 {
        self.gradient(w)[j]
    }

    /// Number of components `n`; 1 when `f` is not a finite sum.
    fn num_components(&self) -> usize {
        1
    }

    fn is_finite_sum(&self) -> bool {
        false
    }

    fn component_value(&self, _i: usize, _w: &[f64]) -> Result<f64> {
        Err(Error::Unsupported("objective is not a finite sum".into()))
    }

    fn component_gradient(&self, _i: usize, _w: &[f64]) -> Result<Vec<f64>> {
        Err(Error::Unsupported("objective is not a finite sum".into()))
    }

    fn constants(&self) -> &KnownConstants;

    /// Spectral norm of the Hessian at `w`, when available.
    fn hessian_norm(&self, _w: &[f64]) -> Option<f64> {
        None
    }

    /// `dᵀ∇²f d` when the Hessian is constant everywhere (quadratics). Line
    /// optimization uses this for a closed-form step.
    fn constant_curvature(&self, _d: &[f64]) -> Option<f64> {
        None
    }
}

fn check_point(obj: &dyn Objective, w: &[f64]) -> Result<()> {
    if w.len() != obj.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: expected {}, got {}",
            obj.dim(),
            w.len()
        )));
    }
    if !all_finite(w) {
        return Err(Error::input("point has non-finite entries"));
    }
    Ok(())
}

pub fn eval(obj: &dyn Objective, w: &[f64]) -> Result<f64> {
    check_point(obj, w)?;
    Ok(obj.value(w))
}

pub fn grad(obj: &dyn Objective, w: &[f64]) -> Result<Vec<f64>> {
    check_point(obj, w)?;
    Ok(obj.gradient(w))
}

pub fn coord_partial(obj: &dyn Objective, w: &[f64], j: usize) -> Result<f64> {
    check_point(obj, w)?;
    if j >= obj.dim() {
        return Err(Error::input(format!(
            "coordinate {j} out of range for dimension {}",
            obj.dim()
        )));
    }
    Ok(obj.partial(w, j))
}

pub fn component_value(obj: &dyn Objective, i: usize, w: &[f64]) -> Result<f64> {
    check_component(obj, i)?;
    check_point(obj, w)?;
    obj.component_value(i, w)
}

pub fn component_grad(obj: &dyn Objective, i: usize, w: &[f64]) -> Result<Vec<f64>> {
    check_component(obj, i)?;
    check_point(obj, w)?;
    obj.component_gradient(i, w)
}

fn check_component(obj: &dyn Objective, i: usize) -> Result<()> {
    if !obj.is_finite_sum() {
        return Err(Error::Unsupported("objective is not a finite sum".into()));
    }
    if i >= obj.num_components() {
        return Err(Error::input(format!(
            "component {i} out of range for {} components",
            obj.num_components()
        )));
    }
    Ok(())
}

/// Central finite-difference gradient with step `1e-6 * (1 + ‖w‖)`.
pub fn finite_difference_gradient(obj: &dyn Objective, w: &[f64]) -> Vec<f64> {
    let h = 1e-6 * (1.0 + norm(w));
    let mut probe = w.to_vec();
    (0..w.len())
        .map(|j| {
            let orig = probe[j];
            probe[j] = orig + h;
            let up = obj.value(&probe);
            probe[j] = orig - h;
            let down = obj.value(&probe);
            probe[j] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}
