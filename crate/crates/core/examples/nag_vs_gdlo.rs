//! When does line search beat acceleration?
//!
//! GD with exact line optimization against accelerated gradient with step
//! `1/L`, on two two-regime problems: one with a cheap local region
//! (`L* < √(Lμ)`) and one without any local improvement (`L* = L`). The
//! analytic comparison is printed next to the measured iteration counts.

use glocal::linesearch::LoConfig;
use glocal::optimizers::{run_gd, run_nag, NagConfig, StepRule, StopRule};
use glocal::problems::{Objective, Regime, TwoRegimeProblem};
use glocal::theory::gdlo_vs_nag;

fn compare(label: &str, p: &TwoRegimeProblem, w0: &[f64], delta: f64) -> glocal::Result<()> {
    let c = p.constants();
    let (l, mu) = (c.l_global.unwrap(), c.mu.unwrap());
    let eps = 1e-8;
    let stop = StopRule::gap(eps, 100_000);
    let gd = run_gd(p, &StepRule::LineOptimize(LoConfig::default()), w0, &stop)?;
    let nag = run_nag(p, &NagConfig::fixed(mu, l), w0, &stop)?;
    let delta0 = gd.records[0].gap.unwrap();
    let verdict = gdlo_vs_nag(l, p.l_star(), mu, delta0, delta, eps)?;
    println!(
        "{label}: GD(LO) {} vs NAG(1/L) {} iterations; L*/L = {:.4} vs {:.4} -> predicted {}",
        gd.iterations(),
        nag.iterations(),
        verdict.lhs,
        verdict.rhs,
        if verdict.gdlo_faster { "GD(LO)" } else { "NAG" }
    );
    Ok(())
}

fn main() -> glocal::Result<()> {
    let local = TwoRegimeProblem::separable(vec![Regime { radius: 1.0, l: 400.0, l_star: 4.0 }; 2])?;
    compare("L* = 4  ", &local, &[1.01, 0.5], local.local_delta())?;

    let global = TwoRegimeProblem::separable(vec![
        Regime { radius: 1.0, l: 400.0, l_star: 400.0 },
        Regime { radius: 1.0, l: 4.0, l_star: 4.0 },
    ])?;
    let w0 = [0.01, 1.0];
    compare("L* = L  ", &global, &w0, 0.5 * global.value(&w0))?;
    Ok(())
}
