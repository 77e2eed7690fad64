use serde::{Deserialize, Serialize};

use super::trace::{Recorder, StopReason, StopRule, Trace};
use crate::linalg::norm;
use crate::linesearch::{line_optimize_from, LoConfig};
use crate::problems::{eval, grad, Objective};
use crate::rng;
use crate::Result;

/// Coordinate selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Selection {
    /// Uniformly random coordinate from a seeded stream.
    Uniform { seed: u64 },
    /// Largest `|∂_j f|`, lowest index on ties.
    Greedy,
}

/// Index of the largest `|g_j|`, first one on ties.
pub fn greedy_coordinate(g: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in g.iter().enumerate() {
        if v.abs() > g[best].abs() {
            best = j;
        }
    }
    best
}

/// Coordinate descent with exact line optimization along the chosen axis:
/// `w ← w − η ∂_j f(w) e_j`. The recorded step is `η`.
///
/// The full gradient is evaluated every iteration for the trace (and for the
/// greedy rule); iterations whose selected partial derivative is zero leave
/// `w` unchanged.
pub fn run_cd(obj: &dyn Objective, selection: Selection, w0: &[f64], stop: &StopRule, lo: &LoConfig) -> Result<Trace> {
    lo.validate()?;
    let mut rec = Recorder::new(obj, stop, w0)?;
    let mut rng = match selection {
        Selection::Uniform { seed } => Some(rng::stream(seed, rng::ids::COORDINATES)),
        Selection::Greedy => None,
    };
    let d = obj.dim();

    let mut w = w0.to_vec();
    let mut f = eval(obj, &w)?;
    let mut g = grad(obj, &w)?;
    rec.f_evals += 1;
    rec.g_evals += 1;
    let mut step = None;
    loop {
        if let Some(reason) = rec.record(&w, f, norm(&g), step) {
            return Ok(rec.finish(w, reason, None));
        }
        if g.iter().all(|v| *v == 0.0) {
            return Ok(rec.finish(w, StopReason::Stationary, None));
        }
        let j = match rng.as_mut() {
            Some(r) => rng::index(r, d),
            None => greedy_coordinate(&g),
        };
        let p = g[j];
        step = None;
        if p != 0.0 {
            let mut dir = vec![0.0; d];
            dir[j] = -p;
            match line_optimize_from(obj, &w, f, -p * p, &dir, lo) {
                Ok(out) => {
                    rec.f_evals += out.f_evals;
                    rec.g_evals += out.g_evals;
                    w[j] -= out.step * p;
                    step = Some(out.step);
                }
                Err(e) => return rec.fail(w, e),
            }
            f = obj.value(&w);
            g = obj.gradient(&w);
            rec.f_evals += 1;
            rec.g_evals += 1;
        }
    }
}
