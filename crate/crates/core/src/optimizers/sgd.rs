use serde::{Deserialize, Serialize};

use super::trace::{Recorder, StopReason, StopRule, Trace};
use crate::linalg::{axpy, norm};
use crate::linesearch::{stochastic_armijo_from, ArmijoConfig};
use crate::problems::{eval, grad, Objective};
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgdConfig {
    /// Starting trial step of every search.
    pub eta_max: f64,
    pub seed: u64,
    /// `α` and `β` of the stochastic Armijo test; both ½ by default.
    #[serde(default)]
    pub armijo: ArmijoConfig,
}

impl SgdConfig {
    pub fn new(eta_max: f64, seed: u64) -> Self {
        Self { eta_max, seed, armijo: ArmijoConfig::default() }
    }
}

/// SGD on a finite sum with the stochastic Armijo step, restarted at
/// `eta_max` on every iteration.
///
/// Component indices come from the seeded `COMPONENTS` stream. The trace
/// reports the full objective and gradient at each iterate; those monitoring
/// evaluations are counted along with the component evaluations. A sampled
/// component whose gradient is exactly zero is skipped.
pub fn run_sgd(obj: &dyn Objective, cfg: &SgdConfig, w0: &[f64], stop: &StopRule) -> Result<Trace> {
    if !obj.is_finite_sum() {
        return Err(Error::Unsupported("SGD needs a finite-sum objective".into()));
    }
    cfg.armijo.validate()?;
    if !(cfg.eta_max > 0.0 && cfg.eta_max.is_finite()) {
        return Err(Error::input("SGD needs η_max > 0"));
    }
    let mut rec = Recorder::new(obj, stop, w0)?;
    let mut rng = rng::stream(cfg.seed, rng::ids::COMPONENTS);
    let n = obj.num_components();

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
        let i = rng::index(&mut rng, n);
        let f_i = obj.component_value(i, &w)?;
        let g_i = obj.component_gradient(i, &w)?;
        rec.f_evals += 1;
        rec.g_evals += 1;
        step = None;
        if g_i.iter().any(|v| *v != 0.0) {
            match stochastic_armijo_from(obj, i, &w, f_i, &g_i, cfg.eta_max, &cfg.armijo) {
                Ok(out) => {
                    rec.f_evals += out.f_evals;
                    w = axpy(&w, -out.step, &g_i);
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
