use super::trace::{Recorder, StopReason, StopRule, Trace};
use crate::linalg::{axpy, dot, norm, norm_sq, sub};
use crate::linesearch::{line_optimize_from, LoConfig};
use crate::problems::{eval, grad, Objective};
use crate::{Error, Result};

/// Non-linear conjugate gradient with the Polak-Ribière-Polyak coefficient
/// and exact line optimization.
///
/// The search direction is `p_t = −∇f(w_t) + β_t p_{t−1}`, where `p_{t−1}` is
/// the previous step `(w_t − w_{t−1})/η_{t−1}` and
/// `β_t = ⟨g_t, g_t − g_{t−1}⟩ / ‖g_{t−1}‖²`. `β_t` is zero on the first
/// iteration and every `reset_period` iterations after a reset (default `d`).
/// When `p_t` is not a descent direction the iteration falls back to
/// steepest descent, which also restarts the cycle.
pub fn run_nlcg(
    obj: &dyn Objective,
    reset_period: Option<usize>,
    w0: &[f64],
    stop: &StopRule,
    lo: &LoConfig,
) -> Result<Trace> {
    lo.validate()?;
    let period = reset_period.unwrap_or(obj.dim());
    if period == 0 {
        return Err(Error::input("NLCG reset period must be at least 1"));
    }
    let mut rec = Recorder::new(obj, stop, w0)?;
    let mut w = w0.to_vec();
    let mut f = eval(obj, &w)?;
    let mut g = grad(obj, &w)?;
    rec.f_evals += 1;
    rec.g_evals += 1;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None; // (p_{t−1}, g_{t−1})
    let mut since_reset = 0usize;
    let mut step = None;
    loop {
        if let Some(reason) = rec.record(&w, f, norm(&g), step) {
            return Ok(rec.finish(w, reason, None));
        }
        let gsq = norm_sq(&g);
        if gsq == 0.0 {
            return Ok(rec.finish(w, StopReason::Stationary, None));
        }
        if since_reset.is_multiple_of(period) {
            since_reset = 0;
        }
        let steepest: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut p = steepest.clone();
        if since_reset > 0 {
            if let Some((p_prev, g_prev)) = &prev {
                let beta = dot(&g, &sub(&g, g_prev)) / norm_sq(g_prev);
                if beta.is_finite() {
                    p = axpy(&steepest, beta, p_prev);
                }
            }
        }
        let mut slope = dot(&g, &p);
        if slope.is_nan() || slope >= 0.0 {
            p = steepest;
            slope = -gsq;
            since_reset = 0;
        }
        let eta = match line_optimize_from(obj, &w, f, slope, &p, lo) {
            Ok(out) => {
                rec.f_evals += out.f_evals;
                rec.g_evals += out.g_evals;
                out.step
            }
            Err(e) => return rec.fail(w, e),
        };
        w = axpy(&w, eta, &p);
        let g_next = obj.gradient(&w);
        f = obj.value(&w);
        rec.f_evals += 1;
        rec.g_evals += 1;
        prev = Some((p, std::mem::replace(&mut g, g_next)));
        since_reset += 1;
        step = Some(eta);
    }
}
