use serde::{Deserialize, Serialize};

use super::{KnownConstants, Objective};
use crate::theory::{GlocalFlavor, GlocalProfile};
use crate::{Error, Result};

/// One coordinate of a [`TwoRegimeProblem`]: curvature `l_star` on
/// `[-radius, radius]` and `l` outside, glued so the function is C¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    pub radius: f64,
    pub l: f64,
    pub l_star: f64,
}

impl Regime {
    pub fn new(radius: f64, l: f64, l_star: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::input("radius must be positive"));
        }
        if !(l_star > 0.0 && l_star <= l && l.is_finite()) {
            return Err(Error::input(format!(
                "need 0 < L* ≤ L, got L = {l}, L* = {l_star}"
            )));
        }
        Ok(Self { radius, l, l_star })
    }

    pub fn value(&self, x: f64) -> f64 {
        let (r, l, ls) = (self.radius, self.l, self.l_star);
        if x.abs() <= r {
            0.5 * ls * x * x
        } else {
            0.5 * l * x * x - (l - ls) * r * x.abs() + 0.5 * (l - ls) * r * r
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (r, l, ls) = (self.radius, self.l, self.l_star);
        if x.abs() <= r {
            ls * x
        } else {
            l * x - (l - ls) * r * x.signum()
        }
    }

    pub fn curvature(&self, x: f64) -> f64 {
        if x.abs() <= self.radius {
            self.l_star
        } else {
            self.l
        }
    }

    /// Largest `δ` for which `{φ ≤ δ}` lies inside the inner regime.
    pub fn local_delta(&self) -> f64 {
        if self.l == self.l_star {
            f64::INFINITY
        } else {
            0.5 * self.l_star * self.radius * self.radius
        }
    }
}

/// Separable sum `f(w) = Σ_j φ_j(w_j)` of two-regime pieces.
///
/// The one-dimensional case `φ(x) = (L*/2)x²` for `|x| ≤ r` and
/// `(L/2)x² − (L−L*)r|x| + (L−L*)r²/2` beyond is globally `L`-smooth and
/// `L*`-smooth on `{f ≤ L*r²/2}`, with `μ = L*`, `f* = 0`, `w* = 0`.
#[derive(Debug, Clone)]
pub struct TwoRegimeProblem {
    pieces: Vec<Regime>,
    constants: KnownConstants,
}

impl TwoRegimeProblem {
    /// One-dimensional problem.
    pub fn new(radius: f64, l: f64, l_star: f64) -> Result<Self> {
        Self::separable(vec![Regime::new(radius, l, l_star)?])
    }

    pub fn separable(pieces: Vec<Regime>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::input("need at least one coordinate"));
        }
        for p in &pieces {
            Regime::new(p.radius, p.l, p.l_star)?;
        }
        let l = pieces.iter().map(|p| p.l).fold(0.0, f64::max);
        let mu = pieces.iter().map(|p| p.l_star).fold(f64::INFINITY, f64::min);
        let d = pieces.len();
        Ok(Self {
            pieces,
            constants: KnownConstants {
                l_global: Some(l),
                mu: Some(mu),
                f_star: Some(0.0),
                w_star: Some(vec![0.0; d]),
            },
        })
    }

    pub fn pieces(&self) -> &[Regime] {
        &self.pieces
    }

    /// Largest local constant over the coordinates.
    pub fn l_star(&self) -> f64 {
        self.pieces.iter().map(|p| p.l_star).fold(0.0, f64::max)
    }

    /// Sublevel threshold below which every coordinate sits in its inner
    /// regime.
    pub fn local_delta(&self) -> f64 {
        self.pieces.iter().map(Regime::local_delta).fold(f64::INFINITY, f64::min)
    }

    /// Analytic glocal constants in function values.
    pub fn glocal_profile(&self) -> GlocalProfile {
        GlocalProfile {
            l: self.constants.l_global.unwrap_or(0.0),
            l_star: self.l_star(),
            delta: self.local_delta(),
            flavor: GlocalFlavor::FunctionValues,
        }
    }

    /// Glocal constants in iterates: `‖w‖² ≤ min_j r_j²` keeps every
    /// coordinate inside its inner regime.
    pub fn glocal_profile_iterates(&self) -> GlocalProfile {
        let delta = self
            .pieces
            .iter()
            .filter(|p| p.l > p.l_star)
            .map(|p| p.radius * p.radius)
            .fold(f64::INFINITY, f64::min);
        GlocalProfile {
            l: self.constants.l_global.unwrap_or(0.0),
            l_star: self.l_star(),
            delta,
            flavor: GlocalFlavor::Iterates,
        }
    }
}

impl Objective for TwoRegimeProblem {
    fn dim(&self) -> usize {
        self.pieces.len()
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.pieces.iter().zip(w).map(|(p, x)| p.value(*x)).sum()
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        self.pieces.iter().zip(w).map(|(p, x)| p.derivative(*x)).collect()
    }

    fn partial(&self, w: &[f64], j: usize) -> f64 {
        self.pieces[j].derivative(w[j])
    }

    fn constants(&self) -> &KnownConstants {
        &self.constants
    }

    fn hessian_norm(&self, w: &[f64]) -> Option<f64> {
        Some(
            self.pieces
                .iter()
                .zip(w)
                .map(|(p, x)| p.curvature(*x))
                .fold(0.0, f64::max),
        )
    }
}
