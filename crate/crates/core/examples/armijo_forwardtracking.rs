//! Backtracking versus forwardtracking Armijo on a function whose local
//! curvature is far below its global one.
//!
//! Starting every search at `1/L`, plain backtracking can never take a step
//! longer than `1/L`. Forwardtracking grows the step while the sufficient
//! decrease test passes and so adapts to the local constant.

use glocal::linesearch::{ArmijoConfig, ArmijoMode};
use glocal::optimizers::{run_gd, StepRule, StopRule};
use glocal::problems::TwoRegimeProblem;

fn main() -> glocal::Result<()> {
    let p = TwoRegimeProblem::new(1.0, 100.0, 1.0)?;
    let start = ArmijoConfig { eta_init: 0.01, ..ArmijoConfig::default() };
    let stop = StopRule::gap(1e-8, 20_000);
    for (name, mode) in [
        ("backtrack", ArmijoMode::Backtrack),
        ("forward-backtrack", ArmijoMode::ForwardBacktrack),
        ("reset", ArmijoMode::Reset),
    ] {
        let t = run_gd(&p, &StepRule::Armijo(ArmijoConfig { mode, ..start }), &[4.0], &stop)?;
        let last = t.records.last().unwrap();
        println!(
            "{name:<18} {:>5} iterations, {:>6} function evaluations, final step {:.4}",
            t.iterations(),
            last.f_evals,
            last.step.unwrap_or(0.0)
        );
    }
    Ok(())
}
