//! One Polyak step on `f(w) = ½w₀² + (1/40)w₁²` from `(0.05, 1)`.
//!
//! The step moves the iterate closer to the minimizer while the function
//! value goes up, so Polyak steps are not monotone in `f`.
//!
//! ```text
//! cargo run --example polyak_counterexample
//! ```

use glocal::optimizers::{run_gd, StepRule, StopRule};
use glocal::problems::QuadraticProblem;

fn main() -> glocal::Result<()> {
    let q = QuadraticProblem::diagonal(&[1.0, 1.0 / 20.0])?;
    let trace = run_gd(&q, &StepRule::Polyak { f_star: 0.0 }, &[0.05, 1.0], &StopRule::max_iters(1).keeping_iterates())?;
    let (r0, r1) = (&trace.records[0], &trace.records[1]);
    println!("step size      {:.6}", r1.step.unwrap());
    println!("next iterate   ({:.4}, {:.4})", trace.iterates[1][0], trace.iterates[1][1]);
    println!("f              {:.6} -> {:.6}", r0.f, r1.f);
    println!("||w - w*||^2   {:.7} -> {:.7}", r0.dist_sq.unwrap(), r1.dist_sq.unwrap());
    Ok(())
}
