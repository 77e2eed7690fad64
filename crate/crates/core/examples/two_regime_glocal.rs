//! Glocal constants of the two-regime test function and what they buy.
//!
//! Each coordinate has curvature 100 far from the origin and 1 or 2 within
//! radius one, so `L = 100` and `L* = 2`. GD with exact line optimization pays the global
//! condition number only until the gap drops below `δ`, after which it
//! converges at the local rate. GD with the fixed step `1/L` never speeds up.

use glocal::linesearch::LoConfig;
use glocal::optimizers::{run_gd, StepRule, StopRule};
use glocal::problems::{Regime, TwoRegimeProblem};
use glocal::theory::{complexity_bound, BoundInputs, Theorem};

fn main() -> glocal::Result<()> {
    let p = TwoRegimeProblem::separable(vec![
        Regime { radius: 1.0, l: 100.0, l_star: 1.0 },
        Regime { radius: 1.0, l: 100.0, l_star: 2.0 },
    ])?;
    let profile = p.glocal_profile();
    println!("L = {}, L* = {}, delta = {}", profile.l, profile.l_star, profile.delta);

    let w0 = [3.0, -2.5];
    let stop = StopRule::gap(1e-6, 10_000);
    let lo = run_gd(&p, &StepRule::LineOptimize(LoConfig::default()), &w0, &stop)?;
    let fixed = run_gd(&p, &StepRule::Fixed { l: profile.l }, &w0, &stop)?;

    let inputs = BoundInputs::new()
        .with("L", profile.l)
        .with("Lstar", profile.l_star)
        .with("mu", 1.0)
        .with("delta0", lo.records[0].gap.unwrap())
        .with("delta", profile.delta)
        .with("eps", 1e-6);
    let bound = complexity_bound(Theorem::GlocalGdLo, &inputs)?;
    println!("GD(LO):  {} iterations (bound {})", lo.iterations(), bound.t);
    println!("GD(1/L): {} iterations", fixed.iterations());
    Ok(())
}
