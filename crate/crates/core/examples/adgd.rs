//! Adaptive gradient descent (AdGD) needs no line search and no knowledge of
//! `L`: each step is estimated from the last two gradients.
//!
//! The printed steps jump around: they follow whichever curvature the last
//! move probed, and occasionally grow by the `√(1 + θ/2)` factor.

use glocal::optimizers::{run_gd, StepRule, StopRule};
use glocal::problems::QuadraticProblem;

fn main() -> glocal::Result<()> {
    let q = QuadraticProblem::diagonal(&[10.0, 1.0, 0.1])?;
    let t = run_gd(&q, &StepRule::Adgd, &[1.0, 1.0, 1.0], &StopRule::gap(1e-10, 5_000))?;
    for r in t.records.iter().step_by(t.records.len().div_ceil(12).max(1)) {
        let step = r.step.map_or("-".to_string(), |s| format!("{s:.4}"));
        println!("t = {:>4}  gap = {:.3e}  step = {step}", r.iter, r.gap.unwrap());
    }
    println!("stopped after {} iterations: {}", t.iterations(), t.stop.as_str());
    Ok(())
}
