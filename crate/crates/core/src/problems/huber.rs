use nalgebra::{DMatrix, DVector};

use super::{KnownConstants, Objective, QuadraticProblem};
use crate::linalg::{dot, gram_lambda_max};
use crate::{Error, Result};

/// Robust regression `f(w) = Σ_i ρ_τ(⟨x_i, w⟩ − t_i)` with the Huber loss
/// `ρ_τ(r) = r²/(2τ)` for `|r| ≤ τ` and `|r| − τ/2` beyond.
///
/// Inside the region where every residual is at most `τ` the Hessian is the
/// constant `XᵀX/τ`; see [`HuberProblem::quadratic_model`].
#[derive(Debug, Clone)]
pub struct HuberProblem {
    rows: Vec<Vec<f64>>,
    x: DMatrix<f64>,
    targets: Vec<f64>,
    tau: f64,
    constants: KnownConstants,
}

fn huber(r: f64, tau: f64) -> f64 {
    if r.abs() <= tau {
        r * r / (2.0 * tau)
    } else {
        r.abs() - 0.5 * tau
    }
}

fn huber_deriv(r: f64, tau: f64) -> f64 {
    if r.abs() <= tau {
        r / tau
    } else {
        r.signum()
    }
}

impl HuberProblem {
    pub fn new(x: DMatrix<f64>, targets: Vec<f64>, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::input("Huber threshold τ must be positive"));
        }
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
        let rows = (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect();
        let lmax = gram_lambda_max(&x);
        let mut problem = Self {
            rows,
            x,
            targets,
            tau,
            constants: KnownConstants {
                l_global: (lmax > 0.0).then_some(lmax / tau),
                ..Default::default()
            },
        };
        // The least-squares solution is the Huber minimizer whenever all of
        // its residuals fall in the quadratic zone.
        let gram = problem.x.transpose() * &problem.x;
        let rhs = problem.x.transpose() * DVector::from_column_slice(&problem.targets);
        if let Some(chol) = gram.cholesky() {
            let w: Vec<f64> = chol.solve(&rhs).iter().copied().collect();
            if problem.in_quadratic_region(&w) {
                problem.constants.f_star = Some(problem.value(&w));
                problem.constants.w_star = Some(w);
            }
        }
        Ok(problem)
    }

    /// Separable 1-D Huber losses `Σ_j ρ_τ(w_j − t_j)`.
    pub fn separable(targets: Vec<f64>, tau: f64) -> Result<Self> {
        let d = targets.len();
        Self::new(DMatrix::identity(d, d), targets, tau)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn residual(&self, i: usize, w: &[f64]) -> f64 {
        dot(&self.rows[i], w) - self.targets[i]
    }

    pub fn in_quadratic_region(&self, w: &[f64]) -> bool {
        (0..self.rows.len()).all(|i| self.residual(i, w).abs() <= self.tau)
    }

    /// The quadratic that coincides with `f` on the all-quadratic region:
    /// `A = XᵀX/τ`, `b = Xᵀt/τ`, `c = ‖t‖²/(2τ)`.
    pub fn quadratic_model(&self) -> Result<QuadraticProblem> {
        let a = (self.x.transpose() * &self.x) / self.tau;
        // Symmetrize against rounding in the product.
        let a = (&a + a.transpose()) * 0.5;
        let b: Vec<f64> = (self.x.transpose() * DVector::from_column_slice(&self.targets) / self.tau)
            .iter()
            .copied()
            .collect();
        let c = dot(&self.targets, &self.targets) / (2.0 * self.tau);
        QuadraticProblem::new(a, b, c)
    }
}

impl Objective for HuberProblem {
    fn dim(&self) -> usize {
        self.x.ncols()
    }

    fn value(&self, w: &[f64]) -> f64 {
        (0..self.rows.len()).map(|i| huber(self.residual(i, w), self.tau)).sum()
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        for (i, row) in self.rows.iter().enumerate() {
            let s = huber_deriv(self.residual(i, w), self.tau);
            for (gj, xj) in g.iter_mut().zip(row) {
                *gj += s * xj;
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
        Ok(huber(self.residual(i, w), self.tau))
    }

    fn component_gradient(&self, i: usize, w: &[f64]) -> Result<Vec<f64>> {
        let s = huber_deriv(self.residual(i, w), self.tau);
        Ok(self.rows[i].iter().map(|x| s * x).collect())
    }

    fn constants(&self) -> &KnownConstants {
        &self.constants
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::finite_difference_gradient;

    #[test]
    fn continuous_derivative_at_threshold() {
        let tau = 0.5;
        let left = huber_deriv(tau - 1e-12, tau);
        let right = huber_deriv(tau + 1e-12, tau);
        assert!((left - right).abs() < 1e-9);
        assert!((huber(tau, tau) - (tau - 0.5 * tau)).abs() < 1e-15);
    }

    #[test]
    fn matches_quadratic_model_inside_region() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.2, -0.3, 1.0, 0.5, 0.5]);
        let h = HuberProblem::new(x, vec![0.1, -0.2, 0.3], 2.0).unwrap();
        let q = h.quadratic_model().unwrap();
        let w = [0.05, -0.1];
        assert!(h.in_quadratic_region(&w));
        assert!((h.value(&w) - q.value(&w)).abs() < 1e-14);
        let (gh, gq) = (h.gradient(&w), q.gradient(&w));
        for (a, b) in gh.iter().zip(&gq) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_matches_finite_differences_in_linear_zone() {
        let h = HuberProblem::separable(vec![0.0, 1.0], 0.1).unwrap();
        let w = [2.0, -3.0];
        let fd = finite_difference_gradient(&h, &w);
        let g = h.gradient(&w);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() <= 1e-4 * (1.0 + a.abs()));
        }
        assert_eq!(h.constants().f_star, Some(0.0));
    }
}
