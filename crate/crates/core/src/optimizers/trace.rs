use serde::{Deserialize, Serialize};

use crate::linalg::dist_sq;
use crate::problems::Objective;
use crate::{Error, Result};

/// When a run stops. `max_iters` is always in force; the targets are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    /// Stop once `f(w_t) − f* ≤ gap`.
    #[serde(default)]
    pub gap: Option<f64>,
    /// Stop once `‖w_t − w*‖² ≤ dist_sq`.
    #[serde(default)]
    pub dist_sq: Option<f64>,
    /// Stop once `‖∇f(w_t)‖ ≤ grad_norm`.
    #[serde(default)]
    pub grad_norm: Option<f64>,
    pub max_iters: usize,
    /// Keep every iterate in [`Trace::iterates`].
    #[serde(default)]
    pub keep_iterates: bool,
}

impl StopRule {
    pub fn max_iters(max_iters: usize) -> Self {
        Self { gap: None, dist_sq: None, grad_norm: None, max_iters, keep_iterates: false }
    }

    pub fn gap(eps: f64, max_iters: usize) -> Self {
        Self { gap: Some(eps), ..Self::max_iters(max_iters) }
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }

    /// Checks the targets against what `obj` knows about its optimum.
    pub fn validate(&self, obj: &dyn Objective) -> Result<()> {
        for (name, v) in [("gap", self.gap), ("dist_sq", self.dist_sq), ("grad_norm", self.grad_norm)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::input(format!("stop target `{name}` must be positive")));
                }
            }
        }
        if self.gap.is_some() && obj.constants().f_star.is_none() {
            return Err(Error::input("gap target needs a known f*; use grad_norm or max_iters"));
        }
        if self.dist_sq.is_some() && obj.constants().w_star.is_none() {
            return Err(Error::input("distance target needs a known w*"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    GapTarget,
    DistTarget,
    GradTarget,
    MaxIters,
    SearchFailure,
    UnboundedDirection,
    /// The gradient (or every usable direction) vanished exactly.
    Stationary,
    /// Non-finite values, a non-descent direction, or an inconsistent `f*`.
    NumericalFailure,
}

impl StopReason {
    /// Whether the run ended because of a failure rather than a criterion.
    pub fn is_failure(self) -> bool {
        matches!(self, StopReason::SearchFailure | StopReason::UnboundedDirection | StopReason::NumericalFailure)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::GapTarget => "gap-target",
            StopReason::DistTarget => "dist-target",
            StopReason::GradTarget => "grad-target",
            StopReason::MaxIters => "max-iters",
            StopReason::SearchFailure => "search-failure",
            StopReason::UnboundedDirection => "unbounded-direction",
            StopReason::Stationary => "stationary",
            StopReason::NumericalFailure => "numerical-failure",
        }
    }
}

/// One row of a [`Trace`]. `step` is the step size that produced `w_t` (none
/// at `t = 0` or when the iteration did not move).
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub iter: usize,
    pub f: f64,
    pub gap: Option<f64>,
    pub grad_norm: f64,
    pub step: Option<f64>,
    pub dist_sq: Option<f64>,
    pub f_evals: usize,
    pub g_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<Record>,
    pub final_w: Vec<f64>,
    pub stop: StopReason,
    /// Error text when the run stopped on a failure.
    pub message: Option<String>,
    /// `w_0, w_1, …` when [`StopRule::keep_iterates`] was set.
    pub iterates: Vec<Vec<f64>>,
}

impl Trace {
    /// Index of the last recorded iterate.
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.iter)
    }

    /// First `t` with `f(w_t) − f* ≤ eps`.
    pub fn iterations_to_gap(&self, eps: f64) -> Option<usize> {
        self.records.iter().find(|r| r.gap.is_some_and(|g| g <= eps)).map(|r| r.iter)
    }

    pub fn final_gap(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.gap)
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f).collect()
    }
}

/// Error kinds that end a run with a stop reason instead of an `Err`.
pub(crate) fn stop_reason_for(err: &Error) -> Option<StopReason> {
    match err {
        Error::SearchFailure { .. } => Some(StopReason::SearchFailure),
        Error::UnboundedDirection { .. } => Some(StopReason::UnboundedDirection),
        Error::Stationary => Some(StopReason::Stationary),
        Error::NotDescent { .. } | Error::Numerical(_) | Error::InconsistentOptimum { .. } => {
            Some(StopReason::NumericalFailure)
        }
        _ => None,
    }
}

/// Shared bookkeeping for the drivers: evaluation counters, records and the
/// stopping test.
pub(crate) struct Recorder<'a> {
    stop: &'a StopRule,
    f_star: Option<f64>,
    w_star: Option<&'a [f64]>,
    pub f_evals: usize,
    pub g_evals: usize,
    records: Vec<Record>,
    iterates: Vec<Vec<f64>>,
}

impl<'a> Recorder<'a> {
    pub fn new(obj: &'a dyn Objective, stop: &'a StopRule, w0: &[f64]) -> Result<Self> {
        stop.validate(obj)?;
        if w0.len() != obj.dim() {
            return Err(Error::input(format!(
                "initial point has dimension {}, expected {}",
                w0.len(),
                obj.dim()
            )));
        }
        if !crate::linalg::all_finite(w0) {
            return Err(Error::input("initial point has non-finite entries"));
        }
        let c = obj.constants();
        Ok(Self {
            stop,
            f_star: c.f_star,
            w_star: c.w_star.as_deref(),
            f_evals: 0,
            g_evals: 0,
            records: Vec::new(),
            iterates: Vec::new(),
        })
    }

    /// Appends row `t` and reports the first criterion it satisfies.
    pub fn record(&mut self, w: &[f64], f: f64, grad_norm: f64, step: Option<f64>) -> Option<StopReason> {
        let iter = self.records.len();
        let gap = self.f_star.map(|fs| f - fs);
        let dist = self.w_star.map(|ws| dist_sq(w, ws));
        self.records.push(Record {
            iter,
            f,
            gap,
            grad_norm,
            step,
            dist_sq: dist,
            f_evals: self.f_evals,
            g_evals: self.g_evals,
        });
        if self.stop.keep_iterates {
            self.iterates.push(w.to_vec());
        }
        if !(f.is_finite() && grad_norm.is_finite()) {
            return Some(StopReason::NumericalFailure);
        }
        if let (Some(target), Some(g)) = (self.stop.gap, gap) {
            if g <= target {
                return Some(StopReason::GapTarget);
            }
        }
        if let (Some(target), Some(d)) = (self.stop.dist_sq, dist) {
            if d <= target {
                return Some(StopReason::DistTarget);
            }
        }
        if let Some(target) = self.stop.grad_norm {
            if grad_norm <= target {
                return Some(StopReason::GradTarget);
            }
        }
        if iter >= self.stop.max_iters {
            return Some(StopReason::MaxIters);
        }
        None
    }

    pub fn finish(self, final_w: Vec<f64>, stop: StopReason, message: Option<String>) -> Trace {
        let message = message.or_else(|| {
            (stop == StopReason::NumericalFailure).then(|| "objective or gradient became non-finite".to_string())
        });
        Trace { records: self.records, final_w, stop, message, iterates: self.iterates }
    }

    /// Ends the run on `err` if it is a runtime stop, otherwise propagates it.
    pub fn fail(self, final_w: Vec<f64>, err: Error) -> Result<Trace> {
        match stop_reason_for(&err) {
            Some(reason) => Ok(self.finish(final_w, reason, Some(err.to_string()))),
            None => Err(err),
        }
    }
}
