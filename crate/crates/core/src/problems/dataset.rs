//! Sparse datasets, the LIBSVM text format, and seeded generators.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::linalg::{dot, norm, symmetric_eigenvalues};
use crate::rng::{self, ids};
use crate::{Error, Result};

/// Rows of sparse `(index, value)` features with one label per row.
///
/// Indices are 0-based, strictly increasing within a row, and below `dim`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub rows: Vec<Vec<(usize, f64)>>,
    pub labels: Vec<f64>,
    pub dim: usize,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<(usize, f64)>>, labels: Vec<f64>, dim: usize) -> Result<Self> {
        let ds = Self { rows, labels, dim };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.labels.len() {
            return Err(Error::input(format!(
                "{} rows but {} labels",
                self.rows.len(),
                self.labels.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            for (k, (idx, v)) in row.iter().enumerate() {
                if *idx >= self.dim {
                    return Err(Error::input(format!(
                        "row {i}: index {idx} outside dimension {}",
                        self.dim
                    )));
                }
                if k > 0 && row[k - 1].0 >= *idx {
                    return Err(Error::input(format!(
                        "row {i}: indices must be strictly increasing"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::input(format!("row {i}: non-finite value")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.rows.len(), self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                x[(i, j)] = v;
            }
        }
        x
    }

    /// Labels mapped to ±1 by sign; zero labels are rejected.
    pub fn binary_labels(&self) -> Result<Vec<f64>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                if y > 0.0 {
                    Ok(1.0)
                } else if y < 0.0 {
                    Ok(-1.0)
                } else {
                    Err(Error::input(format!("row {i}: label 0 is not a binary class")))
                }
            })
            .collect()
    }

    /// Builds a dataset from dense rows, dropping nothing (zeros included).
    pub fn from_dense(x: &DMatrix<f64>, labels: Vec<f64>) -> Result<Self> {
        let rows = (0..x.nrows())
            .map(|i| (0..x.ncols()).map(|j| (j, x[(i, j)])).collect())
            .collect();
        Self::new(rows, labels, x.ncols())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LibsvmOptions {
    /// Declared dimension; must cover every index in the file.
    pub dimension: Option<usize>,
    /// Map labels to ±1 by sign (rejecting 0).
    pub binary: bool,
}

/// Parses LIBSVM text with raw (real-valued) labels.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset> {
    parse_libsvm_with(reader, LibsvmOptions::default())
}

pub fn parse_libsvm_with<R: BufRead>(reader: R, opts: LibsvmOptions) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: lineno, message };
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a token");
        let mut label: f64 = label_tok
            .parse()
            .map_err(|_| err(format!("malformed label {label_tok:?}")))?;
        if !label.is_finite() {
            return Err(err(format!("non-finite label {label_tok:?}")));
        }
        if opts.binary {
            if label == 0.0 {
                return Err(err("label 0 is not a binary class".into()));
            }
            label = label.signum();
        }
        let mut row: Vec<(usize, f64)> = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(format!("malformed feature token {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| err(format!("malformed index in {tok:?}")))?;
            if idx == 0 {
                return Err(err("indices are 1-based; found 0".into()));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| err(format!("non-numeric value in {tok:?}")))?;
            if !val.is_finite() {
                return Err(err(format!("non-finite value in {tok:?}")));
            }
            if let Some(&(prev, _)) = row.last() {
                if idx - 1 <= prev {
                    return Err(err(format!("index {idx} does not increase")));
                }
            }
            max_index = max_index.max(idx);
            row.push((idx - 1, val));
        }
        rows.push(row);
        labels.push(label);
    }
    let dim = match opts.dimension {
        Some(d) if d < max_index => {
            return Err(Error::input(format!(
                "declared dimension {d} is below the largest index {max_index}"
            )))
        }
        Some(d) => d,
        None => max_index,
    };
    Dataset::new(rows, labels, dim)
}

/// Writes LIBSVM text; values use the shortest round-trip decimal form.
pub fn write_libsvm<W: Write>(data: &Dataset, mut out: W) -> Result<()> {
    for (row, label) in data.rows.iter().zip(&data.labels) {
        write!(out, "{label}")?;
        for (j, v) in row {
            write!(out, " {}:{}", j + 1, v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Linearly separable binary data with a planted unit direction `u`:
/// every row satisfies `y_i⟨x_i, u⟩ ≥ margin`. Returns the data and `u`.
///
/// Features are standard normal; a sample on the wrong side of the margin
/// has its component along `u` moved past it.
pub fn gen_separable_logistic(n: usize, d: usize, margin: f64, seed: u64) -> Result<(Dataset, Vec<f64>)> {
    if n == 0 || d == 0 {
        return Err(Error::input("n and d must be at least 1"));
    }
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::input("margin must be positive"));
    }
    let mut rng = rng::stream(seed, ids::DATA);
    let u = loop {
        let v = rng::normal_vec(&mut rng, d);
        let nv = norm(&v);
        if nv > 1e-8 {
            break v.iter().map(|x| x / nv).collect::<Vec<f64>>();
        }
    };
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let y = if rng::index(&mut rng, 2) == 0 { -1.0 } else { 1.0 };
        let mut x = rng::normal_vec(&mut rng, d);
        loop {
            let proj = dot(&x, &u);
            if y * proj >= margin {
                break;
            }
            let target = y * (margin * (1.0 + 1e-6) + proj.abs());
            for (xj, uj) in x.iter_mut().zip(&u) {
                *xj += (target - proj) * uj;
            }
        }
        rows.push(x.into_iter().enumerate().collect());
        labels.push(y);
    }
    Ok((Dataset::new(rows, labels, d)?, u))
}

/// Realizable least-squares data: standard normal `X` with
/// `λ_min(XᵀX) > 1e-6` and targets `t = X w_true` exactly.
pub fn gen_realizable_ls(n: usize, d: usize, seed: u64) -> Result<(Dataset, Vec<f64>)> {
    if d == 0 || n < d {
        return Err(Error::input("need n ≥ d ≥ 1"));
    }
    let mut rng = rng::stream(seed, ids::DATA);
    for _ in 0..1000 {
        let dense: Vec<Vec<f64>> = (0..n).map(|_| rng::normal_vec(&mut rng, d)).collect();
        let x = DMatrix::from_fn(n, d, |i, j| dense[i][j]);
        let gram = x.transpose() * &x;
        if symmetric_eigenvalues(&gram)[0] <= 1e-6 {
            continue;
        }
        let w_true = rng::normal_vec(&mut rng, d);
        let labels = dense.iter().map(|row| dot(row, &w_true)).collect();
        let rows = dense.into_iter().map(|r| r.into_iter().enumerate().collect()).collect();
        return Ok((Dataset::new(rows, labels, d)?, w_true));
    }
    Err(Error::Numerical("could not draw a full-rank design".into()))
}
