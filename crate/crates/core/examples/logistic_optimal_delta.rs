//! Choosing `δ` for logistic regression.
//!
//! For logistic loss the local constant grows with the sublevel threshold,
//! `L*(δ) = (ℓ* + δ)·λ_max(XᵀX)`. The resulting iteration bound, as a
//! function of `δ`, is minimized in closed form through the Lambert W
//! function. This prints a sweep and the optimum for a synthetic dataset.

use glocal::problems::gen_separable_logistic;
use glocal::theory::{logistic_h, optimal_delta_logistic, LogisticGlocal};

fn main() -> glocal::Result<()> {
    let (data, _) = gen_separable_logistic(200, 5, 0.1, 2)?;
    let x = data.to_dense();
    let (delta0, eps, ell_star) = (10.0, 1e-3, 0.0);
    let g = LogisticGlocal::new(&x, ell_star)?;
    println!("L = {:.4}", g.l());
    for delta in [1e-3, 1e-2, 5e-2, 1e-1, 1.0, 10.0] {
        println!("delta = {delta:<6}  L*(delta) = {:<10.4}  h = {:.4}", g.l_star(delta), logistic_h(delta0, eps, ell_star, delta));
    }
    let opt = optimal_delta_logistic(delta0, eps, ell_star)?;
    println!("optimal delta = {:.6} ({:?}), h = {:.6}", opt.delta, opt.case, opt.h_min);
    Ok(())
}
