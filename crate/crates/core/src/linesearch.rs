//! Step-size searches: exact line optimization, Armijo variants, the
//! stochastic Armijo rule and the two-step search used by accelerated
//! gradient.

use serde::{Deserialize, Serialize};

use crate::linalg::{axpy, dot, norm_sq};
use crate::problems::{component_grad, component_value, eval, grad, Objective};
use crate::{Error, Result};

/// Settings for [`line_optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoConfig {
    /// First trial step of the bracket expansion.
    pub initial_step: f64,
    /// Factor by which the bracket grows while the slope stays negative.
    pub growth: f64,
    /// Stop once `|φ'(η)| ≤ slope_tol · |φ'(0)|`.
    pub slope_tol: f64,
    /// Stop once the bracket is narrower than `interval_tol · (1 + η)`.
    pub interval_tol: f64,
    pub max_evals: usize,
    /// Use `η = −⟨g,d⟩ / dᵀAd` when the objective has a constant Hessian.
    pub closed_form: bool,
}

impl Default for LoConfig {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            growth: 2.0,
            slope_tol: 1e-10,
            interval_tol: 1e-12,
            max_evals: 200,
            closed_form: true,
        }
    }
}

impl LoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::input("LO initial step must be positive"));
        }
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(Error::input("LO growth factor must exceed 1"));
        }
        if !(self.slope_tol > 0.0 && self.interval_tol > 0.0) {
            return Err(Error::input("LO tolerances must be positive"));
        }
        if self.max_evals == 0 {
            return Err(Error::input("LO needs at least one evaluation"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmijoMode {
    /// Shrink by `β` until the condition holds.
    Backtrack,
    /// Grow by `1/β` while the condition holds, otherwise backtrack.
    ForwardBacktrack,
    /// Backtrack, restarting from `η_init` on every call.
    Reset,
}

/// Settings for [`armijo_search`] and [`stochastic_armijo`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArmijoConfig {
    pub alpha: f64,
    pub beta: f64,
    pub mode: ArmijoMode,
    pub eta_init: f64,
    /// In backtrack mode, start each search at the previously accepted step.
    pub warm_start: bool,
    pub max_trials: usize,
}

impl Default for ArmijoConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            mode: ArmijoMode::Backtrack,
            eta_init: 1.0,
            warm_start: true,
            max_trials: 100,
        }
    }
}

impl ArmijoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::input(format!("Armijo α must lie in (0, 1/2], got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::input(format!("Armijo β must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.eta_init > 0.0 && self.eta_init.is_finite()) {
            return Err(Error::input("Armijo initial step must be positive"));
        }
        if self.max_trials == 0 {
            return Err(Error::input("Armijo needs at least one trial"));
        }
        Ok(())
    }

    /// Where the next search begins, given the step accepted last time.
    ///
    /// Forwardtracking always continues from the previous step; backtracking
    /// does so only when warm-started; reset mode never does.
    pub fn start_for(&self, previous: Option<f64>) -> f64 {
        match (self.mode, previous) {
            (ArmijoMode::ForwardBacktrack, Some(p)) => p,
            (ArmijoMode::Backtrack, Some(p)) if self.warm_start => p,
            _ => self.eta_init,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub step: f64,
    pub f_evals: usize,
    pub g_evals: usize,
    /// Every trial step in the order tested.
    pub trials: Vec<f64>,
}

/// Exact minimization of `η ↦ f(w + ηd)`, computing `f(w)` and `∇f(w)`.
pub fn line_optimize(obj: &dyn Objective, w: &[f64], d: &[f64], cfg: &LoConfig) -> Result<SearchOutcome> {
    let f_w = eval(obj, w)?;
    let g = grad(obj, w)?;
    let mut out = line_optimize_from(obj, w, f_w, dot(&g, d), d, cfg)?;
    out.f_evals += 1;
    out.g_evals += 1;
    Ok(out)
}

/// [`line_optimize`] with `f(w)` and the slope `⟨∇f(w), d⟩` already known.
///
/// The bracket `[lo, hi]` grows until `φ'(hi) > 0` or `f(hi) > f(w)`, then
/// bisection on the sign of `φ'` narrows it. A slope of exactly zero during
/// expansion is only accepted once a later point confirms the bracket, so
/// underflowing derivatives on an unbounded ray (separable logistic) still
/// report [`Error::UnboundedDirection`].
pub fn line_optimize_from(
    obj: &dyn Objective,
    w: &[f64],
    f_w: f64,
    slope0: f64,
    d: &[f64],
    cfg: &LoConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    if d.len() != w.len() {
        return Err(Error::input("direction has the wrong dimension"));
    }
    if slope0.is_nan() || slope0 >= 0.0 {
        return Err(Error::NotDescent { slope: slope0 });
    }
    if cfg.closed_form {
        if let Some(curv) = obj.constant_curvature(d) {
            // One Hessian-vector product, booked as a gradient evaluation.
            if curv <= 0.0 {
                return Err(Error::UnboundedDirection { evaluations: 1 });
            }
            let step = -slope0 / curv;
            return Ok(SearchOutcome { step, f_evals: 0, g_evals: 1, trials: vec![step] });
        }
    }

    let mut out = SearchOutcome { step: 0.0, f_evals: 0, g_evals: 0, trials: Vec::new() };
    let slope_at = |eta: f64, out: &mut SearchOutcome| -> f64 {
        out.g_evals += 1;
        out.trials.push(eta);
        dot(&obj.gradient(&axpy(w, eta, d)), d)
    };

    let (mut lo, mut lo_slope) = (0.0, slope0);
    let mut hi = cfg.initial_step;
    loop {
        if out.g_evals >= cfg.max_evals {
            return Err(Error::UnboundedDirection { evaluations: out.f_evals + out.g_evals });
        }
        out.f_evals += 1;
        let f_hi = obj.value(&axpy(w, hi, d));
        let s_hi = slope_at(hi, &mut out);
        if s_hi.is_nan() || f_hi.is_nan() {
            return Err(Error::Numerical(format!("objective is NaN at step {hi}")));
        }
        if s_hi > 0.0 || f_hi > f_w {
            if lo_slope == 0.0 {
                out.step = lo;
                return Ok(out);
            }
            break;
        }
        lo = hi;
        lo_slope = s_hi;
        hi *= cfg.growth;
        if !hi.is_finite() {
            return Err(Error::UnboundedDirection { evaluations: out.f_evals + out.g_evals });
        }
    }

    let target = cfg.slope_tol * slope0.abs();
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.interval_tol * (1.0 + mid) || out.g_evals >= cfg.max_evals {
            out.step = mid;
            return Ok(out);
        }
        let s = slope_at(mid, &mut out);
        if s.abs() <= target {
            out.step = mid;
            return Ok(out);
        }
        if s < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Shared backtracking/forwardtracking loop.
///
/// `phi(η)` returns the objective after a step of size `η`; the test is
/// `phi(η) ≤ f0 − α η ‖g‖²`, with equality passing.
#[allow(clippy::too_many_arguments)]
fn sufficient_decrease_search(
    mut phi: impl FnMut(f64) -> f64,
    f0: f64,
    grad_sq: f64,
    alpha: f64,
    beta: f64,
    eta_start: f64,
    forward: bool,
    max_trials: usize,
) -> Result<SearchOutcome> {
    let mut out = SearchOutcome { step: 0.0, f_evals: 0, g_evals: 0, trials: Vec::new() };
    let mut test = |eta: f64, out: &mut SearchOutcome| -> bool {
        out.f_evals += 1;
        out.trials.push(eta);
        let f = phi(eta);
        f <= f0 - alpha * eta * grad_sq
    };

    let mut eta = eta_start;
    if forward && test(eta, &mut out) {
        let mut last_pass = eta;
        while out.trials.len() < max_trials {
            let next = eta / beta;
            if !next.is_finite() || !test(next, &mut out) {
                break;
            }
            eta = next;
            last_pass = eta;
        }
        out.step = last_pass;
        return Ok(out);
    }
    if forward {
        eta *= beta;
    }
    while out.trials.len() < max_trials {
        if test(eta, &mut out) {
            out.step = eta;
            return Ok(out);
        }
        eta *= beta;
    }
    Err(Error::SearchFailure { trials: out.trials.len() })
}

/// Armijo search along `−g` from `w`, where `f_w = f(w)` and `g = ∇f(w)`.
///
/// Backtrack and reset modes test `eta_start·β^k`; forward-backtrack first
/// grows by `1/β` while the condition holds and returns the last passing step.
/// Only function values are evaluated.
pub fn armijo_search(
    obj: &dyn Objective,
    w: &[f64],
    f_w: f64,
    g: &[f64],
    cfg: &ArmijoConfig,
    eta_start: f64,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    if !(eta_start > 0.0 && eta_start.is_finite()) {
        return Err(Error::input("Armijo start step must be positive"));
    }
    let grad_sq = norm_sq(g);
    if grad_sq == 0.0 {
        return Err(Error::Stationary);
    }
    sufficient_decrease_search(
        |eta| obj.value(&axpy(w, -eta, g)),
        f_w,
        grad_sq,
        cfg.alpha,
        cfg.beta,
        eta_start,
        cfg.mode == ArmijoMode::ForwardBacktrack,
        cfg.max_trials,
    )
}

/// Stochastic Armijo on component `i`: start at `eta_max` every call and shrink
/// until `f_i(w − η∇f_i(w)) ≤ f_i(w) − α η ‖∇f_i(w)‖²`.
///
/// With the usual `α = β = ½` the test reads `− (η/2)‖∇f_i‖²`. The mode and
/// warm-start fields of `cfg` are ignored.
pub fn stochastic_armijo(
    obj: &dyn Objective,
    i: usize,
    w: &[f64],
    eta_max: f64,
    cfg: &ArmijoConfig,
) -> Result<SearchOutcome> {
    let f_i = component_value(obj, i, w)?;
    let g_i = component_grad(obj, i, w)?;
    let mut out = stochastic_armijo_from(obj, i, w, f_i, &g_i, eta_max, cfg)?;
    out.f_evals += 1;
    out.g_evals += 1;
    Ok(out)
}

/// [`stochastic_armijo`] with `f_i(w)` and `∇f_i(w)` already computed.
pub fn stochastic_armijo_from(
    obj: &dyn Objective,
    i: usize,
    w: &[f64],
    f_i: f64,
    g_i: &[f64],
    eta_max: f64,
    cfg: &ArmijoConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    if !(eta_max > 0.0 && eta_max.is_finite()) {
        return Err(Error::input("stochastic Armijo needs η_max > 0"));
    }
    let grad_sq = norm_sq(g_i);
    if grad_sq == 0.0 {
        return Err(Error::Stationary);
    }
    let mut failure = None;
    let out = sufficient_decrease_search(
        |eta| match obj.component_value(i, &axpy(w, -eta, g_i)) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        },
        f_i,
        grad_sq,
        cfg.alpha,
        cfg.beta,
        eta_max,
        false,
        cfg.max_trials,
    );
    match failure {
        Some(e) => Err(e),
        None => out,
    }
}

/// Result of [`nag_two_step_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct NagSearch {
    pub eta: f64,
    /// `q = η μ`
    pub q: f64,
    pub y: Vec<f64>,
    pub f_y: f64,
    pub grad_y: Vec<f64>,
    /// `f(y − η∇f(y))`
    pub f_next: f64,
    pub f_evals: usize,
    pub g_evals: usize,
    pub trials: Vec<f64>,
}

/// Extrapolation point `y = w + (√q/(1+√q))(z − w)`.
pub fn nag_extrapolate(w: &[f64], z: &[f64], q: f64) -> Vec<f64> {
    let s = q.sqrt();
    let c = s / (1.0 + s);
    w.iter().zip(z).map(|(wi, zi)| wi + c * (zi - wi)).collect()
}

/// Two-step Armijo search for accelerated gradient.
///
/// For each trial `η` (from `eta_max`, halving) the extrapolation point `y`
/// is recomputed with `q = ημ` and the step is accepted when
/// `f(y − η∇f(y)) ≤ f(y) − (η/2)‖∇f(y)‖²`. Trials with `ημ > 1` are skipped
/// without evaluation; no step above `1/μ` can pass on a `μ`-strongly convex
/// function and `q` must stay in `(0, 1]`.
pub fn nag_two_step_search(
    obj: &dyn Objective,
    w: &[f64],
    z: &[f64],
    mu: f64,
    eta_max: f64,
    max_trials: usize,
) -> Result<NagSearch> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::input("NAG needs μ > 0"));
    }
    if !(eta_max > 0.0 && eta_max.is_finite()) {
        return Err(Error::input("NAG needs η_max > 0"));
    }
    if w.len() != z.len() || w.len() != obj.dim() {
        return Err(Error::input("NAG sequences have the wrong dimension"));
    }
    let (mut f_evals, mut g_evals) = (0, 0);
    let mut trials = Vec::new();
    let mut eta = eta_max;
    while trials.len() < max_trials {
        trials.push(eta);
        let q = eta * mu;
        if q <= 1.0 {
            let y = nag_extrapolate(w, z, q);
            let f_y = eval(obj, &y)?;
            let grad_y = obj.gradient(&y);
            f_evals += 1;
            g_evals += 1;
            let gsq = norm_sq(&grad_y);
            let f_next = obj.value(&axpy(&y, -eta, &grad_y));
            f_evals += 1;
            if f_next <= f_y - 0.5 * eta * gsq {
                return Ok(NagSearch { eta, q, y, f_y, grad_y, f_next, f_evals, g_evals, trials });
            }
        }
        eta *= 0.5;
    }
    Err(Error::SearchFailure { trials: trials.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::QuadraticProblem;

    fn half_square() -> QuadraticProblem {
        QuadraticProblem::diagonal(&[1.0]).unwrap()
    }

    #[test]
    fn lo_lands_on_minimizer_both_paths() {
        let q = half_square();
        let closed = line_optimize(&q, &[3.0], &[-3.0], &LoConfig::default()).unwrap();
        assert_eq!(closed.step, 1.0);
        let cfg = LoConfig { closed_form: false, ..LoConfig::default() };
        let iter = line_optimize(&q, &[3.0], &[-3.0], &cfg).unwrap();
        assert!((iter.step - 1.0).abs() < 1e-10, "{}", iter.step);
    }

    #[test]
    fn lo_rejects_ascent() {
        let q = half_square();
        let err = line_optimize(&q, &[3.0], &[1.0], &LoConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotDescent { .. }));
    }

    #[test]
    fn armijo_backtracks_to_threshold() {
        let q = half_square();
        let cfg = ArmijoConfig::default();
        let out = armijo_search(&q, &[2.0], 2.0, &[2.0], &cfg, 4.0).unwrap();
        assert_eq!(out.trials, vec![4.0, 2.0, 1.0]);
        assert_eq!(out.step, 1.0);
    }

    #[test]
    fn forward_returns_last_passing() {
        let q = half_square();
        let cfg = ArmijoConfig { mode: ArmijoMode::ForwardBacktrack, ..ArmijoConfig::default() };
        let out = armijo_search(&q, &[2.0], 2.0, &[2.0], &cfg, 0.25).unwrap();
        assert_eq!(out.step, 1.0);
        assert_eq!(out.trials, vec![0.25, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn start_policy() {
        let mut cfg = ArmijoConfig::default();
        assert_eq!(cfg.start_for(Some(0.3)), 0.3);
        cfg.warm_start = false;
        assert_eq!(cfg.start_for(Some(0.3)), 1.0);
        cfg.mode = ArmijoMode::Reset;
        cfg.warm_start = true;
        assert_eq!(cfg.start_for(Some(0.3)), 1.0);
        cfg.mode = ArmijoMode::ForwardBacktrack;
        assert_eq!(cfg.start_for(Some(0.3)), 0.3);
        assert_eq!(cfg.start_for(None), 1.0);
    }

    #[test]
    fn nag_search_skips_steps_beyond_inverse_mu() {
        let q = QuadraticProblem::diagonal(&[2.0]).unwrap();
        let s = nag_two_step_search(&q, &[1.0], &[1.0], 2.0, 4.0, 50).unwrap();
        assert_eq!(s.eta, 0.5);
        assert_eq!(s.f_next, 0.0);
        assert_eq!(s.f_evals, 2);
    }
}
