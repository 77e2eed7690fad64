use serde::{Deserialize, Serialize};

use super::trace::{Recorder, StopReason, StopRule, Trace};
use crate::linalg::{axpy, norm, norm_sq};
use crate::linesearch::{nag_extrapolate, nag_two_step_search};
use crate::problems::{eval, grad, Objective};
use crate::{Error, Result};

/// Step-size policy for accelerated gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NagStep {
    /// Two-step Armijo search halving from `eta_max`.
    Search {
        eta_max: f64,
        #[serde(default = "default_trials")]
        max_trials: usize,
    },
    /// Constant `η = 1/L`, so `q = μ/L`.
    Fixed { l: f64 },
}

fn default_trials() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NagConfig {
    pub mu: f64,
    pub step: NagStep,
}

impl NagConfig {
    pub fn search(mu: f64, eta_max: f64) -> Self {
        Self { mu, step: NagStep::Search { eta_max, max_trials: default_trials() } }
    }

    pub fn fixed(mu: f64, l: f64) -> Self {
        Self { mu, step: NagStep::Fixed { l } }
    }

    fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::input("NAG needs μ > 0"));
        }
        if let NagStep::Fixed { l } = self.step {
            if !(l >= self.mu && l.is_finite()) {
                return Err(Error::input("fixed-step NAG needs L ≥ μ"));
            }
        }
        Ok(())
    }
}

/// The sequences after iteration `t`: `w_t`, `z_t`, and the extrapolation
/// point and step that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct NagState {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    /// `y_{t−1}`, empty at `t = 0`.
    pub y: Vec<f64>,
    /// `q_{t−1} = η_{t−1} μ`, zero at `t = 0`.
    pub q: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NagRun {
    pub trace: Trace,
    /// One entry per trace record.
    pub states: Vec<NagState>,
}

/// Three-sequence accelerated gradient:
///
/// ```text
/// y_t     = w_t + (√q_t/(1+√q_t)) (z_t − w_t)
/// w_{t+1} = y_t − η_t ∇f(y_t)
/// z_{t+1} = (1 − √q_t) z_t + √q_t (y_t − ∇f(y_t)/μ)
/// ```
///
/// with `z_0 = w_0` and `q_t = η_t μ`.
pub fn run_nag(obj: &dyn Objective, cfg: &NagConfig, w0: &[f64], stop: &StopRule) -> Result<Trace> {
    Ok(run_nag_detailed(obj, cfg, w0, stop)?.trace)
}

/// [`run_nag`] keeping the `(w, z, y, q, η)` state of every iteration.
pub fn run_nag_detailed(obj: &dyn Objective, cfg: &NagConfig, w0: &[f64], stop: &StopRule) -> Result<NagRun> {
    cfg.validate()?;
    let mut rec = Recorder::new(obj, stop, w0)?;
    let mu = cfg.mu;
    let mut w = w0.to_vec();
    let mut z = w0.to_vec();
    let mut f = eval(obj, &w)?;
    let mut g_w = grad(obj, &w)?;
    rec.f_evals += 1;
    rec.g_evals += 1;
    let mut states = vec![NagState { w: w.clone(), z: z.clone(), y: Vec::new(), q: 0.0, eta: 0.0 }];
    let mut step = None;
    loop {
        if let Some(reason) = rec.record(&w, f, norm(&g_w), step) {
            return Ok(NagRun { trace: rec.finish(w, reason, None), states });
        }
        if norm_sq(&g_w) == 0.0 {
            return Ok(NagRun { trace: rec.finish(w, StopReason::Stationary, None), states });
        }
        let (eta, q, y, grad_y, f_next) = match cfg.step {
            NagStep::Search { eta_max, max_trials } => match nag_two_step_search(obj, &w, &z, mu, eta_max, max_trials) {
                Ok(s) => {
                    rec.f_evals += s.f_evals;
                    rec.g_evals += s.g_evals;
                    (s.eta, s.q, s.y, s.grad_y, s.f_next)
                }
                Err(e) => return rec.fail(w, e).map(|trace| NagRun { trace, states }),
            },
            NagStep::Fixed { l } => {
                let eta = 1.0 / l;
                let q = mu * eta;
                let y = nag_extrapolate(&w, &z, q);
                let grad_y = obj.gradient(&y);
                rec.g_evals += 1;
                let f_next = obj.value(&axpy(&y, -eta, &grad_y));
                rec.f_evals += 1;
                (eta, q, y, grad_y, f_next)
            }
        };
        let s = q.sqrt();
        w = axpy(&y, -eta, &grad_y);
        z = z
            .iter()
            .zip(&y)
            .zip(&grad_y)
            .map(|((zi, yi), gi)| (1.0 - s) * zi + s * (yi - gi / mu))
            .collect();
        f = f_next;
        g_w = obj.gradient(&w);
        rec.g_evals += 1;
        step = Some(eta);
        states.push(NagState { w: w.clone(), z: z.clone(), y, q, eta });
    }
}

/// Accelerated gradient in two-sequence momentum form,
/// `y_t = w_t + c_t (w_t − w_{t−1})`, `w_{t+1} = y_t − η_t ∇f(y_t)`, with
/// `c_t = ((1 − √q_{t−1})/(1 + √q_t)) √(η_t/η_{t−1})` and `w_{−1} = w_0`.
///
/// The step sizes are taken from a three-sequence [`run_nag`] with the same
/// inputs, so both forms share one `η_t` sequence and should produce the same
/// iterates. The trace covers exactly as many iterations as that run.
pub fn nag_momentum_form(obj: &dyn Objective, cfg: &NagConfig, w0: &[f64], stop: &StopRule) -> Result<Trace> {
    let reference = run_nag_detailed(obj, cfg, w0, stop)?;
    let etas: Vec<f64> = reference.states[1..].iter().map(|s| s.eta).collect();
    let replay_stop = StopRule { gap: None, dist_sq: None, grad_norm: None, ..stop.clone() };
    let mut trace = nag_momentum_replay(obj, cfg.mu, &etas, w0, &replay_stop)?;
    trace.stop = reference.trace.stop;
    Ok(trace)
}

/// Runs the momentum form for the given step sizes, one iteration per entry
/// (stopping earlier if `stop.max_iters` is smaller).
pub fn nag_momentum_replay(obj: &dyn Objective, mu: f64, etas: &[f64], w0: &[f64], stop: &StopRule) -> Result<Trace> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::input("NAG needs μ > 0"));
    }
    if let Some(bad) = etas.iter().find(|e| !(**e > 0.0 && **e * mu <= 1.0)) {
        return Err(Error::input(format!("step {bad} outside (0, 1/μ]")));
    }
    let mut rec = Recorder::new(obj, stop, w0)?;
    let mut w = w0.to_vec();
    let mut w_prev = w0.to_vec();
    let mut f = eval(obj, &w)?;
    let mut g_w = grad(obj, &w)?;
    rec.f_evals += 1;
    rec.g_evals += 1;
    let mut step = None;
    for (t, &eta) in etas.iter().enumerate() {
        if let Some(reason) = rec.record(&w, f, norm(&g_w), step) {
            return Ok(rec.finish(w, reason, None));
        }
        let coef = if t == 0 {
            0.0
        } else {
            let (q_prev, q) = (etas[t - 1] * mu, eta * mu);
            (1.0 - q_prev.sqrt()) / (1.0 + q.sqrt()) * (eta / etas[t - 1]).sqrt()
        };
        let y: Vec<f64> = w.iter().zip(&w_prev).map(|(wi, pi)| wi + coef * (wi - pi)).collect();
        let grad_y = obj.gradient(&y);
        rec.g_evals += 1;
        let next = axpy(&y, -eta, &grad_y);
        w_prev = std::mem::replace(&mut w, next);
        f = obj.value(&w);
        g_w = obj.gradient(&w);
        rec.f_evals += 1;
        rec.g_evals += 1;
        step = Some(eta);
    }
    let reason = rec.record(&w, f, norm(&g_w), step).unwrap_or(StopReason::MaxIters);
    Ok(rec.finish(w, reason, None))
}
