use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{read_config, resolve, CompareConfig, ExperimentConfig};
use super::output::{exit_code_for, fmt_num, to_json_line, write_combined_csv, write_trace_csv, Summary};
use super::{GenKind, EXIT_OK, EXIT_RUNTIME};
use crate::optimizers::Trace;
use crate::problems::{gen_realizable_ls, gen_separable_logistic, parse_libsvm, write_libsvm};
use crate::theory::{
    complexity_bound, gdlo_vs_nag, logistic_h, optimal_delta_logistic, BoundInputs, DeltaCase, LineSearchVsAcceleration,
    LogisticGlocal, Theorem,
};
use crate::{Error, Result};

fn config_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

/// Builds the problem and initial point of `cfg` and runs it. Dataset paths
/// resolve against `base`.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<Trace> {
    let obj = cfg.problem.build(base)?;
    let w0 = cfg.init.point(obj.dim(), cfg.seed)?;
    cfg.algorithm.run(obj.as_ref(), &w0, &cfg.stop, cfg.seed)
}

/// `run CONFIG`
pub fn cmd_run(config: &Path, out: &mut dyn Write) -> Result<i32> {
    let cfg: ExperimentConfig = read_config(config)?;
    let base = config_dir(config);
    let trace = run_experiment(&cfg, &base)?;
    if let Some(p) = &cfg.output.trace {
        write_trace_csv(&trace, create(&resolve(&base, p))?)?;
    }
    let summary = to_json_line(&Summary::new(&trace, &cfg, cfg.seed));
    match &cfg.output.summary {
        Some(p) => {
            let mut f = create(&resolve(&base, p))?;
            f.write_all(summary.as_bytes())?;
            f.flush()?;
        }
        None => out.write_all(summary.as_bytes())?,
    }
    Ok(exit_code_for(trace.stop))
}

/// `bounds TAG --SYMBOL VALUE ...`
pub fn cmd_bounds(tag: &str, args: &[String], out: &mut dyn Write) -> Result<i32> {
    let theorem: Theorem = tag.parse()?;
    let mut inputs = BoundInputs::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let name = flag
            .strip_prefix("--")
            .ok_or_else(|| Error::input(format!("expected `--SYMBOL VALUE`, got `{flag}`")))?;
        let raw = it.next().ok_or_else(|| Error::input(format!("missing value for `{name}`")))?;
        let value: f64 = raw
            .parse()
            .map_err(|_| Error::input(format!("input `{name}` is not a number: `{raw}`")))?;
        inputs.set(name, value)?;
    }
    let bound = complexity_bound(theorem, &inputs)?;
    out.write_all(to_json_line(&bound).as_bytes())?;
    Ok(EXIT_OK)
}

/// Where `glocal` gets its data matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum GlocalSource {
    File(PathBuf),
    Separable { n: usize, d: usize, margin: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlocalArgs {
    pub source: Option<GlocalSource>,
    pub ell_star: f64,
    pub deltas: Vec<f64>,
    pub optimal: bool,
    pub delta0: Option<f64>,
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub json: bool,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    delta: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "Lstar")]
    l_star: f64,
    #[serde(rename = "T")]
    t: Option<u64>,
}

#[derive(Debug, Serialize)]
struct OptimalReport {
    delta_star: f64,
    case: DeltaCase,
    xi: f64,
    omega: Option<f64>,
    /// Closed-form minimum of `h` for the selected case.
    h_formula: f64,
    /// `h(δ*)` evaluated directly.
    h_at_delta_star: f64,
    #[serde(rename = "L")]
    l: Option<f64>,
    #[serde(rename = "Lstar")]
    l_star: Option<f64>,
    #[serde(rename = "T")]
    t: Option<u64>,
}

fn gd_lo_bound(l: f64, l_star: f64, mu: f64, delta0: f64, delta: f64, eps: f64) -> Result<u64> {
    let inputs = BoundInputs::new()
        .with("L", l)
        .with("Lstar", l_star)
        .with("mu", mu)
        .with("delta0", delta0)
        .with("delta", delta)
        .with("eps", eps);
    Ok(complexity_bound(Theorem::GlocalGdLo, &inputs)?.t)
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| "-".into())
}

/// `glocal`: a `δ` sweep over `L*(δ)`, or the bound-minimizing `δ`.
pub fn cmd_glocal(args: &GlocalArgs, out: &mut dyn Write) -> Result<i32> {
    let glocal = match &args.source {
        None => None,
        Some(GlocalSource::File(p)) => {
            let f = File::open(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let data = parse_libsvm(BufReader::new(f))?;
            Some(LogisticGlocal::new(&data.to_dense(), args.ell_star)?)
        }
        Some(GlocalSource::Separable { n, d, margin, seed }) => {
            let (data, _) = gen_separable_logistic(*n, *d, *margin, *seed)?;
            Some(LogisticGlocal::new(&data.to_dense(), args.ell_star)?)
        }
    };
    let bound_for = |delta: f64, g: &LogisticGlocal| -> Result<Option<u64>> {
        match (args.mu, args.delta0, args.eps) {
            (Some(mu), Some(d0), Some(eps)) => Ok(Some(gd_lo_bound(g.l(), g.l_star(delta), mu, d0, delta, eps)?)),
            _ => Ok(None),
        }
    };

    if args.optimal {
        let (delta0, eps) = match (args.delta0, args.eps) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::input("--optimal needs --delta0 and --eps")),
        };
        let opt = optimal_delta_logistic(delta0, eps, args.ell_star)?;
        let (l, l_star, t) = match &glocal {
            Some(g) => (Some(g.l()), Some(g.l_star(opt.delta)), bound_for(opt.delta, g)?),
            None => (None, None, None),
        };
        let report = OptimalReport {
            delta_star: opt.delta,
            case: opt.case,
            xi: opt.xi,
            omega: opt.omega,
            h_formula: opt.h_min,
            h_at_delta_star: logistic_h(delta0, eps, args.ell_star, opt.delta),
            l,
            l_star,
            t,
        };
        if args.json {
            out.write_all(to_json_line(&report).as_bytes())?;
        } else {
            let case = serde_json::to_value(report.case).expect("case serializes");
            writeln!(out, "delta_star {}", fmt_num(report.delta_star))?;
            writeln!(out, "case       {}", case.as_str().unwrap_or_default())?;
            writeln!(out, "xi         {}", fmt_num(report.xi))?;
            writeln!(out, "omega      {}", opt_cell(report.omega))?;
            writeln!(out, "h_formula  {}", fmt_num(report.h_formula))?;
            writeln!(out, "h(delta*)  {}", fmt_num(report.h_at_delta_star))?;
            writeln!(out, "L          {}", opt_cell(report.l))?;
            writeln!(out, "Lstar      {}", opt_cell(report.l_star))?;
            writeln!(out, "T          {}", report.t.map_or("-".into(), |t| t.to_string()))?;
        }
        return Ok(EXIT_OK);
    }

    let g = glocal.ok_or_else(|| Error::input("a δ sweep needs --data or --separable"))?;
    if args.deltas.is_empty() {
        return Err(Error::input("give at least one --delta (or --optimal)"));
    }
    let mut rows = Vec::with_capacity(args.deltas.len());
    for &delta in &args.deltas {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::input(format!("δ must be positive, got {delta}")));
        }
        rows.push(SweepRow { delta, l: g.l(), l_star: g.l_star(delta), t: bound_for(delta, &g)? });
    }
    if args.json {
        out.write_all(to_json_line(&rows).as_bytes())?;
    } else {
        writeln!(out, "{:<14} {:<24} {:<24} T", "delta", "L", "Lstar")?;
        for r in &rows {
            let t = r.t.map_or("-".into(), |t| t.to_string());
            writeln!(out, "{:<14} {:<24} {:<24} {}", fmt_num(r.delta), fmt_num(r.l), fmt_num(r.l_star), t)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct AlgorithmVerdict<'a> {
    name: &'a str,
    stop_reason: &'a str,
    iterations: usize,
    iterations_to_eps: Option<usize>,
    f_evals: usize,
    g_evals: usize,
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    eps: Option<f64>,
    algorithms: Vec<AlgorithmVerdict<'a>>,
    /// Name of the run reaching `eps` in the fewest iterations (first on ties).
    fastest: Option<&'a str>,
    analytic: Option<LineSearchVsAcceleration>,
}

/// `compare CONFIG`
///
/// Runs execute concurrently; output is merged in declaration order, so it
/// does not depend on scheduling.
pub fn cmd_compare(config: &Path, out: &mut dyn Write) -> Result<i32> {
    let cfg: CompareConfig = read_config(config)?;
    if cfg.algorithms.len() < 2 {
        return Err(Error::input("compare needs at least two algorithms"));
    }
    let base = config_dir(config);
    let obj = cfg.problem.build(&base)?;
    let w0 = cfg.init.point(obj.dim(), cfg.seed)?;
    let analytic = match cfg.constants {
        Some(c) => Some(gdlo_vs_nag(c.l, c.l_star, c.mu, c.delta0, c.delta, c.eps)?),
        None => None,
    };

    let results: Vec<Result<Trace>> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .algorithms
            .iter()
            .map(|a| {
                let (obj, w0, stop) = (obj.as_ref(), &w0, &cfg.stop);
                s.spawn(move || a.algorithm.run(obj, w0, stop, cfg.seed))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Numerical("run panicked".into()))))
            .collect()
    });
    let traces = results.into_iter().collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = cfg.algorithms.iter().map(|a| a.name.clone()).collect();

    match &cfg.output.csv {
        Some(p) => write_combined_csv(&names, &traces, create(&resolve(&base, p))?)?,
        None => write_combined_csv(&names, &traces, &mut *out)?,
    }

    let eps = cfg.stop.gap;
    let algorithms: Vec<AlgorithmVerdict> = names
        .iter()
        .zip(&traces)
        .map(|(name, t)| AlgorithmVerdict {
            name,
            stop_reason: t.stop.as_str(),
            iterations: t.iterations(),
            iterations_to_eps: eps.and_then(|e| t.iterations_to_gap(e)),
            f_evals: t.records.last().map_or(0, |r| r.f_evals),
            g_evals: t.records.last().map_or(0, |r| r.g_evals),
        })
        .collect();
    let fastest = algorithms
        .iter()
        .filter_map(|a| a.iterations_to_eps.map(|k| (k, a.name)))
        .min_by_key(|(k, _)| *k)
        .map(|(_, n)| n);
    let verdict = to_json_line(&Verdict { eps, algorithms, fastest, analytic });
    match &cfg.output.verdict {
        Some(p) => {
            let mut f = create(&resolve(&base, p))?;
            f.write_all(verdict.as_bytes())?;
            f.flush()?;
        }
        None => out.write_all(verdict.as_bytes())?,
    }
    let failed = traces.iter().any(|t| t.stop.is_failure());
    Ok(if failed { EXIT_RUNTIME } else { EXIT_OK })
}

/// `gen KIND --n N --d D [--margin M] --seed S --out PATH`
pub fn cmd_gen(kind: GenKind, n: usize, d: usize, margin: Option<f64>, seed: u64, path: &Path) -> Result<i32> {
    let data = match kind {
        GenKind::Separable => {
            let margin = margin.ok_or_else(|| Error::input("separable data needs --margin"))?;
            gen_separable_logistic(n, d, margin, seed)?.0
        }
        GenKind::Realizable => gen_realizable_ls(n, d, seed)?.0,
    };
    let mut f = create(path)?;
    write_libsvm(&data, &mut f)?;
    f.flush()?;
    Ok(EXIT_OK)
}
