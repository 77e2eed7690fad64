//! Iteration drivers. Each run returns a [`Trace`] of per-iterate records.

mod cd;
mod gd;
mod nag;
mod nlcg;
mod sgd;
mod trace;

pub use cd::{greedy_coordinate, run_cd, Selection};
pub use gd::{run_gd, StepRule};
pub use nag::{nag_momentum_form, nag_momentum_replay, run_nag, run_nag_detailed, NagConfig, NagRun, NagState, NagStep};
pub use nlcg::run_nlcg;
pub use sgd::{run_sgd, SgdConfig};
pub use trace::{Record, StopReason, StopRule, Trace};
