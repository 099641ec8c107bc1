//! Run reports: one JSON document per run, plus flat CSV rows for result
//! ledgers and `budget_ratio,nmi` curves.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Everything needed to re-run a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub k: usize,
    /// Branching factor (active only).
    pub b: Option<usize>,
    /// Random picks per cluster (active only).
    pub s: Option<usize>,
    /// Leaf threshold (active only).
    pub t_h: Option<usize>,
    pub p: usize,
    pub seed: u64,
    /// Pairs asked up front (random-rival only).
    pub budget: Option<usize>,
    pub objective: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub algorithm: String,
    pub n: usize,
    pub params: ReportParams,
    pub nmi: Option<f64>,
    pub nmi_variant: String,
    pub asked_pairs: usize,
    pub asked_ratio: f64,
    /// Closed-form ratio estimate (active only).
    pub predicted_ratio: Option<f64>,
    /// `"inf"` when some point could not reach its medoid.
    #[serde(with = "lenient_f64")]
    pub objective: f64,
    pub iterations: usize,
    pub medoids: Vec<usize>,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

/// JSON has no infinities; they are written as the strings `"inf"` / `"-inf"`.
mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr<'a> {
        Num(f64),
        Text(&'a str),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            f64::INFINITY => Repr::Text("inf").serialize(s),
            f64::NEG_INFINITY => Repr::Text("-inf").serialize(s),
            v => Repr::Num(v).serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text("inf") => Ok(f64::INFINITY),
            Repr::Text("-inf") => Ok(f64::NEG_INFINITY),
            Repr::Text(other) => Err(serde::de::Error::custom(format!("not a number: {other}"))),
        }
    }
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| CliError::io(path, e))
    }
}

pub const LEDGER_HEADER: &str =
    "dataset,algorithm,n,k,b,s,t_h,p,seed,budget,nmi,asked_pairs,asked_ratio,objective,wall_time_ms";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// One ledger line matching [`LEDGER_HEADER`].
pub fn ledger_row(r: &RunReport) -> String {
    let p = &r.params;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.dataset,
        r.algorithm,
        r.n,
        p.k,
        opt(&p.b),
        opt(&p.s),
        opt(&p.t_h),
        p.p,
        p.seed,
        opt(&p.budget),
        opt(&r.nmi),
        r.asked_pairs,
        r.asked_ratio,
        r.objective,
        r.wall_time_ms
    )
}

/// Appends rows to a results ledger, writing the header when the file is new.
pub fn append_ledger(path: &Path, reports: &[RunReport]) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut text = String::new();
    if fresh {
        text.push_str(LEDGER_HEADER);
        text.push('\n');
    }
    for r in reports {
        text.push_str(&ledger_row(r));
        text.push('\n');
    }
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

/// `budget_ratio,nmi` rows for a budget sweep.
pub fn curve_csv(points: &[(f64, Option<f64>)]) -> String {
    let mut out = String::from("budget_ratio,nmi\n");
    for (ratio, nmi) in points {
        out.push_str(&format!("{ratio},{}\n", opt(nmi)));
    }
    out
}
