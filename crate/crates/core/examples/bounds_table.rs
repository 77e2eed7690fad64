//! Every iteration-complexity bound evaluated at one set of constants.

use glocal::theory::{complexity_bound, BoundInputs, Exactness, Theorem};

fn main() -> glocal::Result<()> {
    let inputs = BoundInputs::new()
        .with("L", 100.0)
        .with("Lstar", 5.0)
        .with("mu", 1.0)
        .with("mustar", 2.0)
        .with("mu1", 0.5)
        .with("delta0", 10.0)
        .with("dist0", 20.0)
        .with("delta", 0.1)
        .with("eps", 1e-6)
        .with("d", 10.0)
        .with("alpha", 0.5)
        .with("beta", 0.5)
        .with("Phi3", 20.0)
        .with("R2", 20.0)
        .with("R2local", 0.5)
        .with("Lmax", 100.0)
        .with("Lmaxstar", 5.0);
    println!("{:<16} {:>10}  {:<22} note", "theorem", "T", "phases");
    for th in Theorem::ALL {
        let b = complexity_bound(th, &inputs)?;
        let note = if b.exactness == Exactness::OrderOnly { "order only" } else { "" };
        println!("{:<16} {:>10}  {:<22} {note}", th.tag(), b.t, format!("{:?}", b.phases));
    }
    Ok(())
}
