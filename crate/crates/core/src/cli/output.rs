//! Trace CSV and summary JSON emission.

use std::io::Write;

use serde::Serialize;

use crate::optimizers::{StopReason, Trace};
use crate::Result;

pub const TRACE_HEADER: &str = "iter,f,gap,grad_norm,step_size,dist_sq,feval,geval";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn write_trace_csv<W: Write>(trace: &Trace, mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in &trace.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.iter,
            fmt_num(r.f),
            fmt_opt(r.gap),
            fmt_num(r.grad_norm),
            fmt_opt(r.step),
            fmt_opt(r.dist_sq),
            r.f_evals,
            r.g_evals
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a, C: Serialize> {
    pub stop_reason: &'a str,
    pub iterations: usize,
    pub final_gap: Option<f64>,
    pub f_evals: usize,
    pub g_evals: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<&'a str>,
    pub config: &'a C,
    pub seed: u64,
}

impl<'a, C: Serialize> Summary<'a, C> {
    pub fn new(trace: &'a Trace, config: &'a C, seed: u64) -> Self {
        let last = trace.records.last();
        Self {
            stop_reason: trace.stop.as_str(),
            iterations: trace.iterations(),
            final_gap: trace.final_gap(),
            f_evals: last.map_or(0, |r| r.f_evals),
            g_evals: last.map_or(0, |r| r.g_evals),
            message: trace.message.as_deref(),
            config,
            seed,
        }
    }
}

/// Pretty JSON followed by a newline.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Gap-versus-iteration table with one `<name>_f,<name>_gap,<name>_step_size`
/// group per run. Runs that stopped early leave their cells empty.
pub fn write_combined_csv<W: Write>(names: &[String], traces: &[Trace], mut out: W) -> Result<()> {
    let mut header = vec!["iter".to_string()];
    for n in names {
        header.push(format!("{n}_f"));
        header.push(format!("{n}_gap"));
        header.push(format!("{n}_step_size"));
    }
    writeln!(out, "{}", header.join(","))?;
    let rows = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
    for i in 0..rows {
        let mut line = vec![i.to_string()];
        for t in traces {
            match t.records.get(i) {
                Some(r) => {
                    line.push(fmt_num(r.f));
                    line.push(fmt_opt(r.gap));
                    line.push(fmt_opt(r.step));
                }
                None => line.extend([String::new(), String::new(), String::new()]),
            }
        }
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Exit status for a finished run.
pub fn exit_code_for(stop: StopReason) -> i32 {
    if stop.is_failure() {
        super::EXIT_RUNTIME
    } else {
        super::EXIT_OK
    }
}
