//! Uniform and greedy coordinate descent with exact coordinate steps on an
//! ill-conditioned quadratic.

use glocal::linesearch::LoConfig;
use glocal::optimizers::{run_cd, Selection, StopRule};
use glocal::problems::QuadraticProblem;
use nalgebra::DMatrix;

fn main() -> glocal::Result<()> {
    let d = 6;
    let a = DMatrix::from_fn(d, d, |i, j| if i == j { (i + 1) as f64 * 4.0 } else { 0.5 / (1.0 + (i as f64 - j as f64).abs()) });
    let q = QuadraticProblem::new(a, vec![1.0; d], 0.0)?;
    let stop = StopRule::gap(1e-10, 10_000);
    for (name, sel) in [("uniform", Selection::Uniform { seed: 7 }), ("greedy", Selection::Greedy)] {
        let t = run_cd(&q, sel, &vec![0.0; d], &stop, &LoConfig::default())?;
        println!("{name:<8} {:>5} iterations to gap 1e-10", t.iterations());
    }
    Ok(())
}
