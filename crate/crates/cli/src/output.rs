use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use pzk_core::algebra::{Fe, Field};
use pzk_core::protocol::{trial_seed, AuditReport, ProtocolError};
use pzk_core::stats::{binomial_sigma, wilson};
use rayon::prelude::*;
use serde_json::{json, Value};

/// A failure, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, files or parameters: exit 2.
    Usage(String),
    /// A run, sweep or audit violated the property it checks: exit 3.
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Violation(m) => write!(f, "property violation: {m}"),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::QueryBound(b) => {
                CliError::Usage(format!("verifier exceeds the simulator's query bound of {b}"))
            }
            ProtocolError::Coins(e) => CliError::Usage(format!("{e}; raise --max-paths or use fewer verifier passes")),
            e => CliError::Violation(e.to_string()),
        }
    }
}

pub fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// What a command produced: a JSON report, an optional sweep row and
/// whether the checked property held.
pub struct Outcome {
    pub report: Value,
    pub row: Option<SweepRow>,
    pub ok: bool,
}

impl Outcome {
    pub fn new(report: Value, ok: bool) -> Self {
        Outcome { report, row: None, ok }
    }

    pub fn sweep(mut report: Value, row: SweepRow) -> Self {
        report["sweep"] = row.to_json();
        Outcome { ok: row.pass, report, row: Some(row) }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub instance_id: String,
    pub trials: u64,
    pub accepts: u64,
    pub bound: f64,
    pub pass: bool,
}

impl SweepRow {
    /// Completeness sweep: every trial must accept.
    pub fn completeness(instance_id: String, trials: u64, accepts: u64) -> Self {
        SweepRow { instance_id, trials, accepts, bound: 1.0, pass: accepts == trials }
    }

    /// Soundness sweep: the rate must not exceed `bound` by more than
    /// three binomial standard deviations.
    pub fn soundness(instance_id: String, trials: u64, accepts: u64, bound: f64) -> Self {
        let slack = 3.0 * binomial_sigma(bound.min(1.0), trials);
        let pass = (accepts as f64 / trials as f64) <= bound + slack;
        SweepRow { instance_id, trials, accepts, bound, pass }
    }

    pub fn rate(&self) -> f64 {
        self.accepts as f64 / self.trials as f64
    }

    pub fn to_json(&self) -> Value {
        let (lo, hi) = wilson(self.accepts, self.trials, 1.96);
        json!({
            "instance_id": self.instance_id,
            "trials": self.trials,
            "accepts": self.accepts,
            "rate": self.rate(),
            "wilson95": [lo, hi],
            "bound": self.bound,
            "pass": self.pass,
        })
    }
}

pub fn write_csv(path: &Path, row: &SweepRow) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(usage)?;
    w.write_record(["instance-id", "trials", "accepts", "rate", "bound", "pass"]).map_err(usage)?;
    w.write_record([
        row.instance_id.clone(),
        row.trials.to_string(),
        row.accepts.to_string(),
        format!("{:.6}", row.rate()),
        format!("{:.6}", row.bound),
        row.pass.to_string(),
    ])
    .map_err(usage)?;
    w.flush().map_err(usage)
}

/// Writes pretty JSON to `out`, or to stdout when absent.
pub fn emit(out: Option<&PathBuf>, report: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("serializable report") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn parse_elem(f: &Field, v: &Value) -> Result<Fe, CliError> {
    match v {
        Value::String(s) => f.parse(s).map_err(usage),
        Value::Number(n) => n
            .as_u64()
            .filter(|&x| x < f.order())
            .map(Fe)
            .ok_or_else(|| usage(format!("{n} is not an element of F_{}", f.order()))),
        _ => Err(usage(format!("{v} is not a field element"))),
    }
}

/// Reads a JSON array of field elements.
pub fn read_word(f: &Field, path: &Path, len: usize) -> Result<Vec<Fe>, CliError> {
    let v = read_json(path)?;
    let items = v.as_array().ok_or_else(|| usage(format!("{}: expected a JSON array", path.display())))?;
    if items.len() != len {
        return Err(usage(format!("{}: expected {len} elements, found {}", path.display(), items.len())));
    }
    items.iter().map(|x| parse_elem(f, x)).collect()
}

pub fn word_json(f: &Field, w: &[Fe]) -> Value {
    Value::Array(w.iter().map(|&x| json!(f.format(x))).collect())
}

/// Counts accepting trials. Trial `i` runs with seed
/// `trial_seed(seed, side, i)`, so the count does not depend on `jobs`.
pub fn count_accepts<F>(trials: u64, seed: u64, side: u64, jobs: usize, run: F) -> Result<u64, CliError>
where
    F: Fn(u64) -> Result<bool, ProtocolError> + Sync,
{
    let decisions = with_jobs(jobs, || {
        (0..trials).into_par_iter().map(|i| run(trial_seed(seed, side, i))).collect::<Result<Vec<bool>, _>>()
    })??;
    Ok(decisions.into_iter().filter(|&d| d).count() as u64)
}

/// Runs `job` on a pool of `jobs` threads.
pub fn with_jobs<T: Send>(jobs: usize, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(usage)?;
    Ok(pool.install(job))
}

/// The `result` field of an audit report.
pub fn audit_outcome(mut base: Value, prefix: &str, report: &AuditReport) -> Outcome {
    base["result"] = json!(format!("{prefix}-{}", if report.equal { "equal" } else { "differ" }));
    base["audit"] = report.to_json();
    Outcome::new(base, report.equal)
}
