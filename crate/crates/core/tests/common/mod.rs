//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use glocal::problems::{QuadraticProblem, Regime, TwoRegimeProblem};
use glocal::rng;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Random symmetric positive definite `A = Q diag(λ) Qᵀ` with eigenvalues
/// log-uniform in `[lo, hi]` and the extremes pinned to `lo` and `hi`.
pub fn random_spd(d: usize, lo: f64, hi: f64, seed: u64) -> DMatrix<f64> {
    let mut r = rng::stream(seed, 100);
    let g = DMatrix::from_fn(d, d, |_, _| rng::normal(&mut r));
    let q = g.qr().q();
    let mut lambdas: Vec<f64> = (0..d)
        .map(|_| (lo.ln() + r.random::<f64>() * (hi.ln() - lo.ln())).exp())
        .collect();
    lambdas[0] = lo;
    if d > 1 {
        lambdas[d - 1] = hi;
    }
    let a = &q * DMatrix::from_diagonal(&DVector::from_vec(lambdas)) * q.transpose();
    (&a + a.transpose()) * 0.5
}

/// `½wᵀAw` (minimum 0 at the origin) for a random SPD `A`.
pub fn random_centered_quadratic(d: usize, lo: f64, hi: f64, seed: u64) -> QuadraticProblem {
    QuadraticProblem::new(random_spd(d, lo, hi, seed), vec![0.0; d], 0.0).unwrap()
}

/// `½wᵀAw − bᵀw` with a random `b`.
pub fn random_quadratic(d: usize, lo: f64, hi: f64, seed: u64) -> QuadraticProblem {
    let mut r = rng::stream(seed, 101);
    let b = rng::normal_vec(&mut r, d);
    QuadraticProblem::new(random_spd(d, lo, hi, seed), b, 0.0).unwrap()
}

pub fn random_vec(d: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, 102);
    rng::normal_vec(&mut r, d)
}

pub fn uniform(r: &mut rng::Stream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.random::<f64>()
}

/// One-dimensional two-regime problem with `L = 100`, `L* = μ = 1`, `r = 1`,
/// so `δ = L* r²/2 = ½`.
pub fn two_regime_1d() -> TwoRegimeProblem {
    TwoRegimeProblem::new(1.0, 100.0, 1.0).unwrap()
}

/// Two-coordinate variant with local curvatures 1 and 2 (`L* = 2`, `μ = 1`,
/// `δ = ½`), which keeps line optimization from finishing in one step.
pub fn two_regime_2d() -> TwoRegimeProblem {
    TwoRegimeProblem::separable(vec![
        Regime { radius: 1.0, l: 100.0, l_star: 1.0 },
        Regime { radius: 1.0, l: 100.0, l_star: 2.0 },
    ])
    .unwrap()
}

/// Bisection for the root of an increasing function on `[lo, hi]`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Textbook linear conjugate gradient on `Aw = b` from `w0`, returning every
/// iterate (independent of the crate's NLCG driver).
pub fn linear_cg(a: &DMatrix<f64>, b: &[f64], w0: &[f64], iters: usize) -> Vec<Vec<f64>> {
    let b = DVector::from_column_slice(b);
    let mut x = DVector::from_column_slice(w0);
    let mut r = &b - a * &x;
    let mut p = r.clone();
    let mut out = vec![x.as_slice().to_vec()];
    for _ in 0..iters {
        let rr = r.dot(&r);
        if rr == 0.0 {
            break;
        }
        let ap = a * &p;
        let alpha = rr / p.dot(&ap);
        x += alpha * &p;
        let r_next = &r - alpha * &ap;
        let beta = r_next.dot(&r_next) / rr;
        p = &r_next + beta * &p;
        r = r_next;
        out.push(x.as_slice().to_vec());
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
