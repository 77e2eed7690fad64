use nalgebra::{DMatrix, DVector};

use super::{Dataset, KnownConstants, Objective};
use crate::linalg::{dot, gram_lambda_max, symmetric_eigenvalues};
use crate::{Error, Result};

/// `ln(1 + e^z)` without overflow: `max(z, 0) + ln(1 + e^{−|z|})`.
#[inline]
pub fn log1p_exp(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `1 / (1 + e^z)`, the derivative of `ln(1 + e^{−z})` up to sign.
#[inline]
fn sigmoid_neg(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

/// Binary logistic regression with optional ridge term:
/// `f(w) = Σ_i ln(1 + exp(−y_i⟨x_i, w⟩)) + (λ/2)‖w‖²`.
///
/// As a finite sum, component `i` carries its loss term plus `λ/(2n)‖w‖²`.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    x: DMatrix<f64>,
    y: Vec<f64>,
    lambda: f64,
    gram_lambda_max: f64,
    constants: KnownConstants,
}

impl LogisticProblem {
    pub fn new(x: DMatrix<f64>, y: Vec<f64>, lambda: f64) -> Result<Self> {
        if y.len() != x.nrows() {
            return Err(Error::input(format!(
                "{} labels for {} rows",
                y.len(),
                x.nrows()
            )));
        }
        if let Some(bad) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
            return Err(Error::input(format!("labels must be ±1, found {bad}")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::input("ridge coefficient must be finite and ≥ 0"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("features must be finite"));
        }
        let gram = gram_lambda_max(&x);
        let constants = KnownConstants {
            l_global: Some(0.25 * gram + lambda).filter(|l| *l > 0.0),
            mu: (lambda > 0.0).then_some(lambda),
            ..Default::default()
        };
        Ok(Self { x, y, lambda, gram_lambda_max: gram, constants })
    }

    /// Builds the problem from a dataset, mapping labels to ±1 by sign.
    pub fn from_dataset(data: &Dataset, lambda: f64) -> Result<Self> {
        let labels = data.binary_labels()?;
        Self::new(data.to_dense(), labels, lambda)
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }

    pub fn ridge(&self) -> f64 {
        self.lambda
    }

    /// `λ_max(XᵀX)` (power iteration).
    pub fn gram_lambda_max(&self) -> f64 {
        self.gram_lambda_max
    }

    fn margin(&self, i: usize, w: &[f64]) -> f64 {
        let row = self.x.row(i);
        self.y[i] * row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Data term only (no ridge), `ℓ(w)`.
    pub fn loss(&self, w: &[f64]) -> f64 {
        (0..self.x.nrows()).map(|i| log1p_exp(-self.margin(i, w))).sum()
    }

    /// Dense Hessian `XᵀDX + λI`.
    pub fn hessian(&self, w: &[f64]) -> DMatrix<f64> {
        let n = self.x.nrows();
        let d = DVector::from_iterator(
            n,
            (0..n).map(|i| {
                let s = sigmoid_neg(self.margin(i, w));
                s * (1.0 - s)
            }),
        );
        let scaled = DMatrix::from_fn(n, self.x.ncols(), |i, j| self.x[(i, j)] * d[i]);
        let mut h = self.x.transpose() * scaled;
        for j in 0..h.nrows() {
            h[(j, j)] += self.lambda;
        }
        h
    }
}

impl Objective for LogisticProblem {
    fn dim(&self) -> usize {
        self.x.ncols()
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.loss(w) + 0.5 * self.lambda * dot(w, w)
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = w.iter().map(|v| self.lambda * v).collect();
        for i in 0..self.x.nrows() {
            let coef = -self.y[i] * sigmoid_neg(self.margin(i, w));
            for (gj, xij) in g.iter_mut().zip(self.x.row(i).iter()) {
                *gj += coef * xij;
            }
        }
        g
    }

    fn num_components(&self) -> usize {
        self.x.nrows()
    }

    fn is_finite_sum(&self) -> bool {
        true
    }

    fn component_value(&self, i: usize, w: &[f64]) -> Result<f64> {
        let n = self.x.nrows() as f64;
        Ok(log1p_exp(-self.margin(i, w)) + 0.5 * self.lambda / n * dot(w, w))
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Result<Vec<f64>> {
        let n = self.x.nrows() as f64;
        let coef = -self.y[i] * sigmoid_neg(self.margin(i, w));
        Ok(self
            .x
            .row(i)
            .iter()
            .zip(w)
            .map(|(xij, wj)| coef * xij + self.lambda / n * wj)
            .collect())
    }

    fn constants(&self) -> &KnownConstants {
        &self.constants
    }

    fn hessian_norm(&self, w: &[f64]) -> Option<f64> {
        symmetric_eigenvalues(&self.hessian(w)).last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{component_grad, finite_difference_gradient};

    #[test]
    fn value_at_origin_is_n_ln2() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -1.0, 0.5, 0.3, 0.3]);
        let p = LogisticProblem::new(x, vec![1.0, -1.0, 1.0], 0.0).unwrap();
        assert!((p.value(&[0.0, 0.0]) - 3.0 * std::f64::consts::LN_2).abs() < 1e-14);
        assert!(p.constants().mu.is_none());
    }

    #[test]
    fn symmetric_labels_cancel_at_origin() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 1.0, 2.0]);
        let p = LogisticProblem::new(x, vec![1.0, -1.0], 0.0).unwrap();
        let g = p.gradient(&[0.0, 0.0]);
        assert!(g.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn no_overflow_at_large_margins() {
        assert_eq!(log1p_exp(1000.0), 1000.0);
        assert_eq!(log1p_exp(-1000.0), 0.0);
        let x = DMatrix::from_row_slice(1, 1, &[1.0]);
        let p = LogisticProblem::new(x, vec![1.0], 0.0).unwrap();
        assert!(p.value(&[-800.0]).is_finite());
        assert!(p.gradient(&[-800.0])[0].is_finite());
    }

    #[test]
    fn reported_constants() {
        let x = DMatrix::<f64>::identity(2, 2);
        let p = LogisticProblem::new(x, vec![1.0, 1.0], 0.1).unwrap();
        assert!((p.constants().l_global.unwrap() - 0.35).abs() < 1e-10);
        assert_eq!(p.constants().mu, Some(0.1));
    }

    #[test]
    fn gradient_and_components() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -1.0, 0.5, 0.3, -0.7]);
        let p = LogisticProblem::new(x, vec![1.0, -1.0, -1.0], 0.2).unwrap();
        let w = [0.3, -0.4];
        let g = p.gradient(&w);
        let fd = finite_difference_gradient(&p, &w);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() <= 1e-4 * (1.0 + a.abs()));
        }
        let mut sum = vec![0.0; 2];
        for i in 0..3 {
            for (s, v) in sum.iter_mut().zip(component_grad(&p, i, &w).unwrap()) {
                *s += v;
            }
        }
        for (a, b) in g.iter().zip(&sum) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_binary_labels() {
        let x = DMatrix::from_row_slice(1, 1, &[1.0]);
        assert!(LogisticProblem::new(x, vec![0.0], 0.0).is_err());
    }
}
