//! First-order optimization under *glocal* smoothness.
//!
//! A function is glocally `(L, L*, δ)`-smooth when its gradient is globally
//! `L`-Lipschitz but only `L*`-Lipschitz on the sublevel set
//! `{w : f(w) - f* <= δ}`. Methods that adapt their step size (exact line
//! optimization, forward-tracking Armijo, Polyak, AdGD) can exploit the
//! smaller local constant; methods with a fixed `1/L` step cannot.
//!
//! The crate is organised as:
//!
//! * [`problems`]: the [`Objective`](problems::Objective) trait, concrete test
//!   problems, LIBSVM ingestion and seeded dataset generators.
//! * [`linesearch`]: exact line optimization and the Armijo family of searches.
//! * [`stepsizes`]: closed-form step rules (`1/L`, Polyak, AdGD).
//! * [`optimizers`]: iteration drivers producing [`Trace`](optimizers::Trace)s.
//! * [`theory`]: glocal constants, Lambert-W based choice of `δ` for logistic
//!   regression and iteration-complexity calculators.
//! * [`cli`]: the experiment harness behind the `glocal` binary.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod linesearch;
pub mod optimizers;
pub mod problems;
pub mod rng;
pub mod stepsizes;
pub mod theory;

pub use error::{Error, Result};
