use nalgebra::{DMatrix, DVector};

use super::{Dataset, KnownConstants, Objective};
use crate::linalg::{dot, gram_lambda_max, norm_sq, symmetric_eigenvalues};
use crate::{Error, Result};

/// Finite-sum least squares `f(w) = Σ_i ½(⟨x_i, w⟩ − t_i)²`.
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem {
    rows: Vec<Vec<f64>>,
    targets: Vec<f64>,
    dim: usize,
    constants: KnownConstants,
}

impl LeastSquaresProblem {
    /// Builds the problem; when `XᵀX` is nonsingular the minimizer is
    /// computed from the normal equations.
    pub fn new(x: DMatrix<f64>, targets: Vec<f64>) -> Result<Self> {
        if targets.len() != x.nrows() {
            return Err(Error::input(format!(
                "{} targets for {} rows",
                targets.len(),
                x.nrows()
            )));
        }
        if x.iter().chain(targets.iter()).any(|v| !v.is_finite()) {
            return Err(Error::input("data must be finite"));
        }
        let dim = x.ncols();
        let rows = (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect();
        let gram = x.transpose() * &x;
        let eig = symmetric_eigenvalues(&gram);
        let lmax = gram_lambda_max(&x);
        let lmin = eig.first().copied().unwrap_or(0.0);
        let mut constants = KnownConstants {
            l_global: (lmax > 0.0).then_some(lmax),
            ..Default::default()
        };
        if lmin > 1e-12 * lmax.max(1.0) {
            constants.mu = Some(lmin);
            let rhs = x.transpose() * DVector::from_column_slice(&targets);
            if let Some(chol) = gram.cholesky() {
                constants.w_star = Some(chol.solve(&rhs).iter().copied().collect());
            }
        }
        let mut problem = Self { rows, targets, dim, constants };
        if let Some(w) = problem.constants.w_star.clone() {
            problem.constants.f_star = Some(problem.value(&w));
        }
        Ok(problem)
    }

    /// Problem whose targets are exactly realised by `w_true`, so `f* = 0`.
    pub fn with_solution(x: DMatrix<f64>, targets: Vec<f64>, w_true: Vec<f64>) -> Result<Self> {
        let mut problem = Self::new(x, targets)?;
        if w_true.len() != problem.dim {
            return Err(Error::input("solution has the wrong dimension"));
        }
        problem.constants.f_star = Some(0.0);
        problem.constants.w_star = Some(w_true);
        Ok(problem)
    }

    pub fn from_dataset(data: &Dataset) -> Result<Self> {
        Self::new(data.to_dense(), data.labels.clone())
    }

    pub fn residual(&self, i: usize, w: &[f64]) -> f64 {
        dot(&self.rows[i], w) - self.targets[i]
    }

    /// Lipschitz constant of `∇f_i`, `‖x_i‖²`.
    pub fn component_lipschitz(&self, i: usize) -> f64 {
        norm_sq(&self.rows[i])
    }

    pub fn max_component_lipschitz(&self) -> f64 {
        (0..self.rows.len()).map(|i| self.component_lipschitz(i)).fold(0.0, f64::max)
    }
}

impl Objective for LeastSquaresProblem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, w: &[f64]) -> f64 {
        (0..self.rows.len()).map(|i| 0.5 * self.residual(i, w).powi(2)).sum()
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            let r = self.residual(i, w);
            for (gj, xj) in g.iter_mut().zip(row) {
                *gj += r * xj;
            }
        }
        g
    }

    fn num_components(&self) -> usize {
        self.rows.len()
    }

    fn is_finite_sum(&self) -> bool {
        true
    }

    fn component_value(&self, i: usize, w: &[f64]) -> Result<f64> {
        Ok(0.5 * self.residual(i, w).powi(2))
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Result<Vec<f64>> {
        let r = self.residual(i, w);
        Ok(self.rows[i].iter().map(|x| r * x).collect())
    }

    fn constants(&self) -> &KnownConstants {
        &self.constants
    }

    fn constant_curvature(&self, d: &[f64]) -> Option<f64> {
        Some(self.rows.iter().map(|r| dot(r, d).powi(2)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::component_grad;

    #[test]
    fn single_sample_component_gradient() {
        let p = LeastSquaresProblem::new(DMatrix::from_row_slice(1, 1, &[1.0]), vec![1.0]).unwrap();
        assert_eq!(component_grad(&p, 0, &[3.0]).unwrap(), vec![2.0]);
        assert_eq!(p.component_lipschitz(0), 1.0);
    }

    #[test]
    fn index_out_of_range() {
        let p = LeastSquaresProblem::new(DMatrix::from_row_slice(1, 1, &[1.0]), vec![1.0]).unwrap();
        assert!(component_grad(&p, 1, &[0.0]).is_err());
    }

    #[test]
    fn normal_equation_solution() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let p = LeastSquaresProblem::new(x, vec![1.0, 2.0, 4.0]).unwrap();
        let w = p.constants().w_star.clone().unwrap();
        assert!(p.gradient(&w).iter().all(|g| g.abs() < 1e-12));
        assert!(p.constants().f_star.unwrap() > 0.0);
    }
}
