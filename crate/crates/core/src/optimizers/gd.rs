use super::trace::{Recorder, StopReason, StopRule, Trace};
use crate::linalg::{axpy, norm, norm_sq, scale};
use crate::linesearch::{armijo_search, line_optimize_from, ArmijoConfig, LoConfig};
use crate::problems::{eval, grad, Objective};
use crate::stepsizes::{adgd_step, fixed_step, polyak_step, AdgdState, ADGD_ETA0};
use crate::Result;

/// How gradient descent picks `η_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum StepRule {
    /// `η = 1/L`.
    Fixed { l: f64 },
    /// Exact line optimization along `−∇f(w_t)`.
    LineOptimize(LoConfig),
    Armijo(ArmijoConfig),
    /// Polyak step with the given optimal value.
    Polyak { f_star: f64 },
    /// Adaptive step from local curvature estimates.
    Adgd,
}

impl StepRule {
    pub fn name(&self) -> &'static str {
        match self {
            StepRule::Fixed { .. } => "fixed",
            StepRule::LineOptimize(_) => "lo",
            StepRule::Armijo(_) => "armijo",
            StepRule::Polyak { .. } => "polyak",
            StepRule::Adgd => "adgd",
        }
    }
}

/// Gradient descent `w_{t+1} = w_t − η_t ∇f(w_t)`.
///
/// Every call to `f` or `∇f`, line-search trials included, is counted in the
/// trace. Search failures end the run with the matching stop reason.
pub fn run_gd(obj: &dyn Objective, rule: &StepRule, w0: &[f64], stop: &StopRule) -> Result<Trace> {
    let mut rec = Recorder::new(obj, stop, w0)?;
    let fixed = match rule {
        StepRule::Fixed { l } => Some(fixed_step(*l)?),
        StepRule::LineOptimize(cfg) => {
            cfg.validate()?;
            None
        }
        StepRule::Armijo(cfg) => {
            cfg.validate()?;
            None
        }
        _ => None,
    };

    let mut w = w0.to_vec();
    let mut f = eval(obj, &w)?;
    let mut g = grad(obj, &w)?;
    rec.f_evals += 1;
    rec.g_evals += 1;
    let mut step: Option<f64> = None;
    let mut prev_armijo: Option<f64> = None;
    let mut adgd: Option<AdgdState> = None;

    loop {
        if let Some(reason) = rec.record(&w, f, norm(&g), step) {
            return Ok(rec.finish(w, reason, None));
        }
        let gsq = norm_sq(&g);
        if gsq == 0.0 {
            return Ok(rec.finish(w, StopReason::Stationary, None));
        }
        let eta = match rule {
            StepRule::Fixed { .. } => fixed.expect("validated above"),
            StepRule::LineOptimize(cfg) => {
                let d = scale(&g, -1.0);
                match line_optimize_from(obj, &w, f, -gsq, &d, cfg) {
                    Ok(out) => {
                        rec.f_evals += out.f_evals;
                        rec.g_evals += out.g_evals;
                        out.step
                    }
                    Err(e) => return rec.fail(w, e),
                }
            }
            StepRule::Armijo(cfg) => match armijo_search(obj, &w, f, &g, cfg, cfg.start_for(prev_armijo)) {
                Ok(out) => {
                    rec.f_evals += out.f_evals;
                    prev_armijo = Some(out.step);
                    out.step
                }
                Err(e) => return rec.fail(w, e),
            },
            StepRule::Polyak { f_star } => match polyak_step(f, *f_star, gsq) {
                Ok(eta) => eta,
                Err(e) => return rec.fail(w, e),
            },
            StepRule::Adgd => match adgd.take() {
                None => {
                    adgd = Some(AdgdState::start(ADGD_ETA0, w.clone(), g.clone())?);
                    ADGD_ETA0
                }
                Some(state) => match adgd_step(&state, &w, &g) {
                    Ok((eta, next)) => {
                        adgd = Some(next);
                        eta
                    }
                    Err(e) => return rec.fail(w, e),
                },
            },
        };
        w = axpy(&w, -eta, &g);
        f = obj.value(&w);
        g = obj.gradient(&w);
        rec.f_evals += 1;
        rec.g_evals += 1;
        step = Some(eta);
    }
}
