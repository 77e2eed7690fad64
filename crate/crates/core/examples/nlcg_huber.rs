//! Non-linear conjugate gradient (Polak-Ribière with restarts) on a Huber
//! regression problem, next to plain GD with line optimization.

use glocal::linesearch::LoConfig;
use glocal::optimizers::{run_gd, run_nlcg, StepRule, StopRule};
use glocal::problems::{gen_realizable_ls, HuberProblem};

fn main() -> glocal::Result<()> {
    let (data, _) = gen_realizable_ls(60, 8, 5)?;
    let mut targets = data.labels.clone();
    // A few gross outliers, which the Huber loss treats linearly.
    for i in (0..targets.len()).step_by(15) {
        targets[i] += 25.0;
    }
    let h = HuberProblem::new(data.to_dense(), targets, 1.0)?;
    let stop = StopRule { grad_norm: Some(1e-8), ..StopRule::max_iters(5_000) };
    let w0 = vec![0.0; 8];
    let cg = run_nlcg(&h, None, &w0, &stop, &LoConfig::default())?;
    let gd = run_gd(&h, &StepRule::LineOptimize(LoConfig::default()), &w0, &stop)?;
    println!("NLCG    {:>5} iterations, final f = {:.8}", cg.iterations(), cg.records.last().unwrap().f);
    println!("GD(LO)  {:>5} iterations, final f = {:.8}", gd.iterations(), gd.records.last().unwrap().f);
    Ok(())
}
