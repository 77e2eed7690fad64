//! Writing and reading LIBSVM files.

use glocal::problems::{gen_separable_logistic, parse_libsvm, write_libsvm, LogisticProblem, Objective};

fn main() -> glocal::Result<()> {
    let (data, _) = gen_separable_logistic(5, 3, 0.5, 1)?;
    let mut text = Vec::new();
    write_libsvm(&data, &mut text)?;
    print!("{}", String::from_utf8_lossy(&text));

    let back = parse_libsvm(text.as_slice())?;
    assert_eq!(back, data);
    let p = LogisticProblem::from_dataset(&back, 0.0)?;
    println!("n = {}, d = {}, f(0) = {:.6}", back.len(), back.dim, p.value(&vec![0.0; back.dim]));
    Ok(())
}
