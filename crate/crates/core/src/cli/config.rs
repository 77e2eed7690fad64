//! JSON experiment configuration and its translation into problems and runs.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linesearch::{ArmijoConfig, LoConfig};
use crate::optimizers::{
    nag_momentum_form, run_cd, run_gd, run_nag, run_nlcg, run_sgd, NagConfig, NagStep, Selection, SgdConfig,
    StepRule, StopRule, Trace,
};
use crate::problems::{
    gen_realizable_ls, gen_separable_logistic, parse_libsvm, Dataset, HuberProblem, LeastSquaresProblem,
    LogisticProblem, Objective, QuadraticProblem, Regime, TwoRegimeProblem,
};
use crate::rng;
use crate::{Error, Result};

/// Where a dataset comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSpec {
    /// LIBSVM file, relative to the config file.
    File(PathBuf),
    Separable { n: usize, d: usize, margin: f64, seed: u64 },
    Realizable { n: usize, d: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// `½wᵀAw − bᵀw + c`; `b` and `c` default to zero.
    Quadratic {
        a: Vec<Vec<f64>>,
        #[serde(default)]
        b: Option<Vec<f64>>,
        #[serde(default)]
        c: f64,
    },
    /// Separable sum of one-dimensional two-regime pieces.
    TwoRegime { regimes: Vec<Regime> },
    Logistic {
        data: DataSpec,
        #[serde(default)]
        lambda: f64,
    },
    LeastSquares { data: DataSpec },
    Huber { data: DataSpec, tau: f64 },
}

/// Gradient-descent step rule as written in a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StepSpec {
    /// `1/L`, with `L` from the problem unless given.
    Fixed {
        #[serde(default)]
        l: Option<f64>,
    },
    Lo {
        #[serde(default)]
        lo: LoConfig,
    },
    Armijo {
        #[serde(default)]
        armijo: ArmijoConfig,
    },
    /// Polyak step, with `f*` from the problem unless given.
    Polyak {
        #[serde(default)]
        f_star: Option<f64>,
    },
    Adgd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionSpec {
    Uniform,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NagStepSpec {
    Search {
        eta_max: f64,
        #[serde(default = "default_trials")]
        max_trials: usize,
    },
    /// `1/L`, with `L` from the problem unless given.
    Fixed {
        #[serde(default)]
        l: Option<f64>,
    },
}

fn default_trials() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    Gd {
        step: StepSpec,
    },
    Cd {
        selection: SelectionSpec,
        #[serde(default)]
        lo: LoConfig,
    },
    Sgd {
        eta_max: f64,
        #[serde(default)]
        armijo: ArmijoConfig,
    },
    /// Three-sequence accelerated gradient; `mu` defaults to the problem's.
    Nag {
        #[serde(default)]
        mu: Option<f64>,
        step: NagStepSpec,
    },
    /// Momentum form of accelerated gradient, replaying the three-sequence steps.
    NagMomentum {
        #[serde(default)]
        mu: Option<f64>,
        step: NagStepSpec,
    },
    Nlcg {
        #[serde(default)]
        reset_period: Option<usize>,
        #[serde(default)]
        lo: LoConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitSpec {
    #[default]
    Zeros,
    Constant {
        value: f64,
    },
    /// Standard normal entries times `scale`, from the run seed.
    Random {
        #[serde(default = "one")]
        scale: f64,
    },
    Point {
        values: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub trace: Option<PathBuf>,
    /// Summary JSON; printed to stdout when absent.
    #[serde(default)]
    pub summary: Option<PathBuf>,
}

/// A single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub init: InitSpec,
    pub stop: StopRule,
    /// Seeds every random choice of the run (initial point, coordinates,
    /// components). Dataset generators carry their own seeds.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedAlgorithm {
    pub name: String,
    pub algorithm: AlgorithmSpec,
}

/// Constants for the analytic GD(LO)-versus-NAG(1/L) verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConstants {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Lstar")]
    pub l_star: f64,
    pub mu: f64,
    pub delta0: f64,
    pub delta: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CompareOutput {
    /// Combined CSV; printed to stdout when absent.
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Verdict JSON; printed to stdout when absent.
    #[serde(default)]
    pub verdict: Option<PathBuf>,
}

/// Several algorithms on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub problem: ProblemSpec,
    pub algorithms: Vec<NamedAlgorithm>,
    #[serde(default)]
    pub init: InitSpec,
    pub stop: StopRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub constants: Option<ComparisonConstants>,
    #[serde(default)]
    pub output: CompareOutput,
}

/// Reads and parses a JSON config.
pub fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// Resolves `p` against the directory of the config file.
pub fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn load_data(spec: &DataSpec, base: &Path) -> Result<(Dataset, Option<Vec<f64>>)> {
    match spec {
        DataSpec::File(p) => {
            let path = resolve(base, p);
            let file = File::open(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok((parse_libsvm(BufReader::new(file))?, None))
        }
        DataSpec::Separable { n, d, margin, seed } => {
            let (data, _) = gen_separable_logistic(*n, *d, *margin, *seed)?;
            Ok((data, None))
        }
        DataSpec::Realizable { n, d, seed } => {
            let (data, w) = gen_realizable_ls(*n, *d, *seed)?;
            Ok((data, Some(w)))
        }
    }
}

impl ProblemSpec {
    /// Builds the objective; dataset paths are resolved against `base`.
    pub fn build(&self, base: &Path) -> Result<Box<dyn Objective>> {
        Ok(match self {
            ProblemSpec::Quadratic { a, b, c } => {
                let d = a.len();
                if d == 0 || a.iter().any(|r| r.len() != d) {
                    return Err(Error::input("quadratic matrix must be square and non-empty"));
                }
                let m = DMatrix::from_fn(d, d, |i, j| a[i][j]);
                let b = b.clone().unwrap_or_else(|| vec![0.0; d]);
                Box::new(QuadraticProblem::new(m, b, *c)?)
            }
            ProblemSpec::TwoRegime { regimes } => Box::new(TwoRegimeProblem::separable(regimes.clone())?),
            ProblemSpec::Logistic { data, lambda } => {
                let (data, _) = load_data(data, base)?;
                Box::new(LogisticProblem::from_dataset(&data, *lambda)?)
            }
            ProblemSpec::LeastSquares { data } => {
                let (data, truth) = load_data(data, base)?;
                match truth {
                    Some(w) => Box::new(LeastSquaresProblem::with_solution(data.to_dense(), data.labels.clone(), w)?),
                    None => Box::new(LeastSquaresProblem::from_dataset(&data)?),
                }
            }
            ProblemSpec::Huber { data, tau } => {
                let (data, _) = load_data(data, base)?;
                Box::new(HuberProblem::new(data.to_dense(), data.labels.clone(), *tau)?)
            }
        })
    }
}

impl InitSpec {
    pub fn point(&self, dim: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            InitSpec::Zeros => Ok(vec![0.0; dim]),
            InitSpec::Constant { value } => Ok(vec![*value; dim]),
            InitSpec::Random { scale } => {
                let mut r = rng::stream(seed, rng::ids::INIT);
                Ok(rng::normal_vec(&mut r, dim).into_iter().map(|v| v * scale).collect())
            }
            InitSpec::Point { values } => {
                if values.len() != dim {
                    return Err(Error::input(format!(
                        "initial point has {} entries, problem dimension is {dim}",
                        values.len()
                    )));
                }
                Ok(values.clone())
            }
        }
    }
}

fn need(value: Option<f64>, what: &str) -> Result<f64> {
    value.ok_or_else(|| Error::input(format!("{what} is not known for this problem; give it explicitly")))
}

fn nag_config(obj: &dyn Objective, mu: Option<f64>, step: &NagStepSpec) -> Result<NagConfig> {
    let mu = need(mu.or(obj.constants().mu), "μ")?;
    Ok(match *step {
        NagStepSpec::Search { eta_max, max_trials } => NagConfig { mu, step: NagStep::Search { eta_max, max_trials } },
        NagStepSpec::Fixed { l } => NagConfig::fixed(mu, need(l.or(obj.constants().l_global), "L")?),
    })
}

impl AlgorithmSpec {
    /// Runs this algorithm on `obj` from `w0`.
    pub fn run(&self, obj: &dyn Objective, w0: &[f64], stop: &StopRule, seed: u64) -> Result<Trace> {
        let c = obj.constants();
        match self {
            AlgorithmSpec::Gd { step } => {
                let rule = match step {
                    StepSpec::Fixed { l } => StepRule::Fixed { l: need(l.or(c.l_global), "L")? },
                    StepSpec::Lo { lo } => StepRule::LineOptimize(*lo),
                    StepSpec::Armijo { armijo } => StepRule::Armijo(*armijo),
                    StepSpec::Polyak { f_star } => StepRule::Polyak { f_star: need(f_star.or(c.f_star), "f*")? },
                    StepSpec::Adgd => StepRule::Adgd,
                };
                run_gd(obj, &rule, w0, stop)
            }
            AlgorithmSpec::Cd { selection, lo } => {
                let sel = match selection {
                    SelectionSpec::Uniform => Selection::Uniform { seed },
                    SelectionSpec::Greedy => Selection::Greedy,
                };
                run_cd(obj, sel, w0, stop, lo)
            }
            AlgorithmSpec::Sgd { eta_max, armijo } => {
                run_sgd(obj, &SgdConfig { eta_max: *eta_max, seed, armijo: *armijo }, w0, stop)
            }
            AlgorithmSpec::Nag { mu, step } => run_nag(obj, &nag_config(obj, *mu, step)?, w0, stop),
            AlgorithmSpec::NagMomentum { mu, step } => nag_momentum_form(obj, &nag_config(obj, *mu, step)?, w0, stop),
            AlgorithmSpec::Nlcg { reset_period, lo } => run_nlcg(obj, *reset_period, w0, stop, lo),
        }
    }
}
