use nalgebra::{DMatrix, DVector};

use super::{KnownConstants, Objective};
use crate::linalg::{check_symmetric, dot, symmetric_eigenvalues};
use crate::{Error, Result};

/// `f(w) = ½ wᵀAw − bᵀw + c` with `A` symmetric positive semidefinite.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    a: DMatrix<f64>,
    b: Vec<f64>,
    c: f64,
    eigenvalues: Vec<f64>,
    constants: KnownConstants,
}

impl QuadraticProblem {
    pub fn new(a: DMatrix<f64>, b: Vec<f64>, c: f64) -> Result<Self> {
        check_symmetric(&a, 1e-12)?;
        if b.len() != a.nrows() {
            return Err(Error::input(format!(
                "b has length {}, expected {}",
                b.len(),
                a.nrows()
            )));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) || !c.is_finite() {
            return Err(Error::input("quadratic coefficients must be finite"));
        }
        let eigenvalues = symmetric_eigenvalues(&a);
        let lmin = eigenvalues.first().copied().unwrap_or(0.0);
        let lmax = eigenvalues.last().copied().unwrap_or(0.0);
        if lmin < -1e-12 * lmax.abs().max(1.0) {
            return Err(Error::input(format!(
                "matrix is not positive semidefinite (λ_min = {lmin})"
            )));
        }
        let mut constants = KnownConstants {
            l_global: (lmax > 0.0).then_some(lmax),
            ..Default::default()
        };
        if lmin > 0.0 {
            constants.mu = Some(lmin);
            let chol = a.clone().cholesky().ok_or_else(|| {
                Error::Numerical("Cholesky factorization failed on a positive definite matrix".into())
            })?;
            let w_star: Vec<f64> = chol.solve(&DVector::from_column_slice(&b)).iter().copied().collect();
            let f_star = Self::eval_parts(&a, &b, c, &w_star);
            constants.w_star = Some(w_star);
            constants.f_star = Some(f_star);
        }
        Ok(Self { a, b, c, eigenvalues, constants })
    }

    /// Diagonal Hessian with `b = 0`, `c = 0`.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let a = DMatrix::from_diagonal(&DVector::from_column_slice(diag));
        Self::new(a, vec![0.0; diag.len()], 0.0)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn linear_term(&self) -> &[f64] {
        &self.b
    }

    pub fn offset(&self) -> f64 {
        self.c
    }

    /// Eigenvalues of `A`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    fn mat_vec(a: &DMatrix<f64>, w: &[f64]) -> Vec<f64> {
        let n = a.nrows();
        (0..n)
            .map(|i| (0..n).map(|j| a[(i, j)] * w[j]).sum())
            .collect()
    }

    fn eval_parts(a: &DMatrix<f64>, b: &[f64], c: f64, w: &[f64]) -> f64 {
        let aw = Self::mat_vec(a, w);
        0.5 * dot(w, &aw) - dot(b, w) + c
    }
}

impl Objective for QuadraticProblem {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        Self::eval_parts(&self.a, &self.b, self.c, w)
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        Self::mat_vec(&self.a, w)
            .into_iter()
            .zip(&self.b)
            .map(|(aw, b)| aw - b)
            .collect()
    }

    fn partial(&self, w: &[f64], j: usize) -> f64 {
        (0..self.dim()).map(|k| self.a[(j, k)] * w[k]).sum::<f64>() - self.b[j]
    }

    fn constants(&self) -> &KnownConstants {
        &self.constants
    }

    fn hessian_norm(&self, _w: &[f64]) -> Option<f64> {
        self.eigenvalues.last().map(|v| v.abs())
    }

    fn constant_curvature(&self, d: &[f64]) -> Option<f64> {
        Some(dot(d, &Self::mat_vec(&self.a, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{coord_partial, eval, grad};

    fn polyak_example() -> QuadraticProblem {
        QuadraticProblem::diagonal(&[1.0, 1.0 / 20.0]).unwrap()
    }

    #[test]
    fn polyak_example_value_and_gradient() {
        let q = polyak_example();
        let w = [0.05, 1.0];
        assert!((eval(&q, &w).unwrap() - 0.02625).abs() < 1e-15);
        let g = grad(&q, &w).unwrap();
        assert!((g[0] - 0.05).abs() < 1e-15 && (g[1] - 0.05).abs() < 1e-15);
        assert_eq!(q.constants().l_global, Some(1.0));
        assert_eq!(q.constants().mu, Some(0.05));
        assert_eq!(q.constants().f_star, Some(0.0));
    }

    #[test]
    fn diagonal_partial() {
        let q = QuadraticProblem::diagonal(&[1.0, 10.0]).unwrap();
        assert_eq!(coord_partial(&q, &[1.0, 1.0], 1).unwrap(), 10.0);
        assert!(coord_partial(&q, &[1.0, 1.0], 2).is_err());
    }

    #[test]
    fn solution_solves_linear_system() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let q = QuadraticProblem::new(a, vec![1.0, -1.0], 0.5).unwrap();
        let w = q.constants().w_star.clone().unwrap();
        let g = q.gradient(&w);
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(QuadraticProblem::new(a, vec![0.0; 2], 0.0).is_err());
        let q = polyak_example();
        assert!(matches!(eval(&q, &[1.0]), Err(Error::Input(_))));
        assert!(matches!(eval(&q, &[f64::NAN, 0.0]), Err(Error::Input(_))));
    }

    #[test]
    fn singular_psd_has_no_solution() {
        let q = QuadraticProblem::diagonal(&[1.0, 0.0]).unwrap();
        assert!(q.constants().mu.is_none());
        assert!(q.constants().w_star.is_none());
    }
}
