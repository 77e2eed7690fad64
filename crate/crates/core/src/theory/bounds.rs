use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// Failure probability used by the high-probability bounds when none is given.
pub const DEFAULT_ZETA: f64 = 0.1;

/// Every iteration-complexity result the calculator knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    GlocalGdLo,
    Armijo,
    PolyakValues,
    PolyakIterates,
    Adgd,
    GlocalSc,
    ConvexLocalPl,
    ConvexConvex,
    CdRandom,
    CdGreedy,
    Sgd,
    Nag,
    Nlcg,
}

impl Theorem {
    pub const ALL: [Theorem; 13] = [
        Theorem::GlocalGdLo,
        Theorem::Armijo,
        Theorem::PolyakValues,
        Theorem::PolyakIterates,
        Theorem::Adgd,
        Theorem::GlocalSc,
        Theorem::ConvexLocalPl,
        Theorem::ConvexConvex,
        Theorem::CdRandom,
        Theorem::CdGreedy,
        Theorem::Sgd,
        Theorem::Nag,
        Theorem::Nlcg,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::GlocalGdLo => "glocal-gd-lo",
            Theorem::Armijo => "armijo",
            Theorem::PolyakValues => "polyak-values",
            Theorem::PolyakIterates => "polyak-iterates",
            Theorem::Adgd => "adgd",
            Theorem::GlocalSc => "glocal-sc",
            Theorem::ConvexLocalPl => "convex-local-pl",
            Theorem::ConvexConvex => "convex-convex",
            Theorem::CdRandom => "cd-random",
            Theorem::CdGreedy => "cd-greedy",
            Theorem::Sgd => "sgd",
            Theorem::Nag => "nag",
            Theorem::Nlcg => "nlcg",
        }
    }

    pub fn exactness(self) -> Exactness {
        match self {
            Theorem::Adgd | Theorem::ConvexLocalPl | Theorem::ConvexConvex | Theorem::Nlcg => Exactness::OrderOnly,
            _ => Exactness::ExplicitConstants,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| Error::input(format!("unknown bound tag `{s}`")))
    }
}

/// Whether the evaluated count uses constants stated in a theorem or only the
/// constants that appear in its proof of an `O(·)` statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    ExplicitConstants,
    OrderOnly,
}

/// Recognized input symbols, with what each one means.
pub const SYMBOLS: &[(&str, &str)] = &[
    ("L", "global smoothness"),
    ("Lstar", "local smoothness L*"),
    ("mu", "strong convexity / PL constant"),
    ("mustar", "local PL constant μ*"),
    ("mu1", "strong convexity in the 1-norm"),
    ("delta0", "initial gap Δ₀ = f(w₀) − f*"),
    ("dist0", "initial squared distance ‖w₀ − w*‖²"),
    ("delta", "glocal threshold δ"),
    ("eps", "target accuracy ε"),
    ("d", "dimension"),
    ("zeta", "failure probability ζ"),
    ("alpha", "Armijo sufficient-decrease parameter"),
    ("beta", "Armijo backtracking factor"),
    ("Phi3", "AdGD potential after three iterations"),
    ("R2", "R²(f(w₀))"),
    ("R2local", "R²(f* + δ)"),
    ("Lmax", "largest component smoothness"),
    ("Lmaxstar", "largest local component smoothness"),
    ("eta_max", "initial trial step of the search"),
];

/// Named scalar inputs for [`complexity_bound`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundInputs {
    values: BTreeMap<String, f64>,
}

impl BoundInputs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or overwrites a symbol. Unknown names are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !SYMBOLS.iter().any(|(s, _)| *s == name) {
            return Err(Error::input(format!("unknown input symbol `{name}`")));
        }
        if !value.is_finite() {
            return Err(Error::input(format!("input `{name}` must be finite, got {value}")));
        }
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    /// Builder form of [`BoundInputs::set`]; panics on an unknown symbol, so it
    /// is meant for literals in code.
    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value).expect("known symbol");
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityBound {
    pub theorem: Theorem,
    /// Total iteration count: the per-phase ceilings summed.
    #[serde(rename = "T")]
    pub t: u64,
    pub phases: Vec<u64>,
    /// The inputs the formula actually read, including defaults applied.
    pub inputs: BTreeMap<String, f64>,
    pub exactness: Exactness,
}

struct Reader<'a> {
    inputs: &'a BoundInputs,
    used: BTreeMap<String, f64>,
}

impl Reader<'_> {
    fn positive(&mut self, name: &str) -> Result<f64> {
        let v = self
            .inputs
            .get(name)
            .ok_or_else(|| Error::input(format!("missing input `{name}`")))?;
        if v <= 0.0 {
            return Err(Error::input(format!("input `{name}` must be positive, got {v}")));
        }
        self.used.insert(name.to_string(), v);
        Ok(v)
    }

    fn zeta(&mut self) -> Result<f64> {
        let z = self.inputs.get("zeta").unwrap_or(DEFAULT_ZETA);
        if !(z > 0.0 && z < 1.0) {
            return Err(Error::input(format!("input `zeta` must lie in (0, 1), got {z}")));
        }
        self.used.insert("zeta".into(), z);
        Ok(z)
    }
}

/// `⌈coef · max(0, ln(arg))⌉`
fn log_phase(coef: f64, arg: f64) -> u64 {
    ceil(coef * arg.ln().max(0.0))
}

fn ceil(x: f64) -> u64 {
    let x = x.max(0.0).ceil();
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x as u64
    }
}

/// Evaluates the iteration bound named by `theorem`.
///
/// Logarithms whose argument drops below one are clamped to zero, so a start
/// already inside the local region (`Δ₀ ≤ δ`) costs nothing in the first phase.
pub fn complexity_bound(theorem: Theorem, inputs: &BoundInputs) -> Result<ComplexityBound> {
    let mut r = Reader { inputs, used: BTreeMap::new() };
    let phases = match theorem {
        Theorem::GlocalGdLo => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(l / mu, d0 / delta), log_phase(ls / mu, delta / eps)]
        }
        Theorem::Armijo => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (a, b) = (r.positive("alpha")?, r.positive("beta")?);
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            let k = 2.0 * b * a * mu;
            vec![log_phase(l / k, d0 / delta), log_phase(ls / k, delta / eps)]
        }
        Theorem::PolyakValues => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (dist0, delta, eps) = (r.positive("dist0")?, r.positive("delta")?, r.positive("eps")?);
            vec![
                log_phase(4.0 * l / mu, l * dist0 / (2.0 * delta)),
                log_phase(4.0 * ls / mu, (ls / l) * (delta / eps)),
            ]
        }
        Theorem::PolyakIterates => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (dist0, delta, eps) = (r.positive("dist0")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(4.0 * l / mu, dist0 / delta), log_phase(4.0 * ls / mu, delta / eps)]
        }
        Theorem::Adgd => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (phi3, delta, eps) = (r.positive("Phi3")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(4.0 * l / mu, phi3 / delta), log_phase(4.0 * ls / mu, delta / eps)]
        }
        Theorem::GlocalSc => {
            let (l, ls) = (r.positive("L")?, r.positive("Lstar")?);
            let (mu, mu_star) = (r.positive("mu")?, r.positive("mustar")?);
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(l / mu, d0 / delta), log_phase(ls / mu_star, delta / eps)]
        }
        Theorem::ConvexLocalPl => {
            let (l, ls, mu_star) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mustar")?);
            let (r2, delta, eps) = (r.positive("R2")?, r.positive("delta")?, r.positive("eps")?);
            vec![ceil(2.0 * l * r2 / delta), log_phase(ls / mu_star, delta / eps)]
        }
        Theorem::ConvexConvex => {
            let (l, ls) = (r.positive("L")?, r.positive("Lstar")?);
            let (r2, r2_local) = (r.positive("R2")?, r.positive("R2local")?);
            let (delta, eps) = (r.positive("delta")?, r.positive("eps")?);
            vec![ceil(2.0 * l * r2 / delta), ceil(2.0 * ls * r2_local / eps)]
        }
        Theorem::CdRandom => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let d = dimension(&mut r)?;
            let zeta = r.zeta()?;
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(d * l / mu, d0 / (delta * zeta)), log_phase(d * ls / mu, delta / eps)]
        }
        Theorem::CdGreedy => {
            let (l, ls, mu1) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu1")?);
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            vec![log_phase(l / mu1, d0 / delta), log_phase(ls / mu1, delta / eps)]
        }
        Theorem::Sgd => {
            let (lmax, lmax_star, mu) = (r.positive("Lmax")?, r.positive("Lmaxstar")?, r.positive("mu")?);
            let zeta = r.zeta()?;
            let (dist0, delta, eps) = (r.positive("dist0")?, r.positive("delta")?, r.positive("eps")?);
            vec![
                log_phase(2.0 * lmax / mu, dist0 / (delta * zeta)),
                log_phase(2.0 * lmax_star / mu, delta / eps),
            ]
        }
        Theorem::Nag => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let (d0, dist0) = (r.positive("delta0")?, r.positive("dist0")?);
            let (delta, eps) = (r.positive("delta")?, r.positive("eps")?);
            let potential = (l / mu) * (d0 + 0.5 * mu * dist0);
            vec![
                log_phase((2.0 * l / mu).sqrt(), potential / delta),
                log_phase((2.0 * ls / mu).sqrt(), (mu / l) * (delta / eps)),
            ]
        }
        Theorem::Nlcg => {
            let (l, ls, mu) = (r.positive("L")?, r.positive("Lstar")?, r.positive("mu")?);
            let d = dimension(&mut r)?;
            let (d0, delta, eps) = (r.positive("delta0")?, r.positive("delta")?, r.positive("eps")?);
            let kappa = l / mu;
            let kappa_star = ls / mu;
            let global_tail = log_phase(0.5 * kappa * kappa, delta / eps);
            let cg_tail = log_phase(0.5 * kappa_star.sqrt(), 4.0 * kappa_star * kappa_star * delta / eps);
            let d = d as u64;
            vec![log_phase(0.5 * kappa * kappa, d0 / delta), global_tail.min(d + d.min(cg_tail))]
        }
    };
    let t = phases.iter().fold(0u64, |acc, p| acc.saturating_add(*p));
    Ok(ComplexityBound { theorem, t, phases, inputs: r.used, exactness: theorem.exactness() })
}

fn dimension(r: &mut Reader<'_>) -> Result<f64> {
    let d = r.positive("d")?;
    if d.fract() != 0.0 {
        return Err(Error::input(format!("input `d` must be an integer, got {d}")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> BoundInputs {
        BoundInputs::new()
            .with("L", 100.0)
            .with("mu", 1.0)
            .with("Lstar", 10.0)
            .with("delta0", 1.0)
            .with("delta", 0.1)
            .with("eps", 1e-3)
    }

    #[test]
    fn worked_gd_lo_value() {
        let b = complexity_bound(Theorem::GlocalGdLo, &base()).unwrap();
        assert_eq!(b.phases, vec![231, 47]);
        assert_eq!(b.t, 278);
        assert_eq!(b.exactness, Exactness::ExplicitConstants);
    }

    #[test]
    fn missing_symbol_is_named() {
        let err = complexity_bound(Theorem::CdGreedy, &base()).unwrap_err();
        assert!(err.to_string().contains("mu1"), "{err}");
    }

    #[test]
    fn tags_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.tag().parse::<Theorem>().unwrap(), t);
        }
        assert!("gd".parse::<Theorem>().is_err());
    }

    #[test]
    fn zeta_default_is_echoed() {
        let b = complexity_bound(Theorem::CdRandom, &base().with("d", 1.0)).unwrap();
        assert_eq!(b.inputs["zeta"], DEFAULT_ZETA);
    }

    #[test]
    fn start_inside_local_region_has_empty_first_phase() {
        let b = complexity_bound(Theorem::GlocalGdLo, &base().with("delta0", 0.05)).unwrap();
        assert_eq!(b.phases[0], 0);
    }
}
