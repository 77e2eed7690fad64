//! SGD with the stochastic Armijo rule on a least-squares problem that
//! interpolates its data. Every step moves the iterate closer to the solution.

use glocal::optimizers::{run_sgd, SgdConfig, StopRule};
use glocal::problems::{gen_realizable_ls, LeastSquaresProblem};

fn main() -> glocal::Result<()> {
    let (data, w_true) = gen_realizable_ls(100, 10, 3)?;
    let p = LeastSquaresProblem::with_solution(data.to_dense(), data.labels.clone(), w_true)?;
    let t = run_sgd(&p, &SgdConfig::new(10.0, 1), &[0.0; 10], &StopRule::max_iters(2_000))?;
    let dist: Vec<f64> = t.records.iter().map(|r| r.dist_sq.unwrap()).collect();
    let monotone = dist.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    for k in [0, 10, 100, 500, 1000, 2000].into_iter().filter(|k| *k < dist.len()) {
        println!("t = {k:>5}  ||w - w*||^2 = {:.3e}", dist[k]);
    }
    println!("distance never increased: {monotone}");
    Ok(())
}
