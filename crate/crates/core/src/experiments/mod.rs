//! Scripted reproductions: each experiment runs trajectories, evaluates
//! its checks and returns a report with a verdict plus the tables and
//! snapshots to write out.

mod certificates;
mod inputs;
mod kronecker;
mod nonconvergence;
mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{diameter, write_set, CompactSet};

pub use certificates::{ex_limit_nonconvex, ex_limit_not_ellipse, CertificateParams};
pub use inputs::{builtin_names, builtin_shape, resolve_input};
pub use kronecker::{ex_klain, ex_kronecker, KlainParams, KroneckerParams};
pub use nonconvergence::{
    ex_nonconvergence, ex_rotated_convergence, ex_ud_counterexample, NonconvergenceParams, RotatedParams, UdParams,
};
pub use svg::write_svg;

pub const EXPERIMENT_IDS: [&str; 7] = ["ex2.1", "ex2.2", "ex2.3", "thm2.1", "thm5.1", "sec5-ud", "thm6.1"];

/// Cells across the initial diameter for the default raster resolution.
pub const DEFAULT_CELLS: f64 = 512.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    /// `value ≤ threshold`.
    fn at_most(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check::new(name, value <= threshold, value, threshold, detail)
    }

    /// `value ≥ threshold`.
    fn at_least(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check::new(name, value >= threshold, value, threshold, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub parameters: serde_json::Value,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub certificates: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub metrics_csv: String,
}

impl ExperimentReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn certificate(&self, name: &str) -> Option<f64> {
        self.certificates.get(name).copied()
    }
}

/// Rows of numbers under a header, written as CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| fmt_num(*v))).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Integers without a fractional part, everything else in shortest
/// round-trip form.
fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Everything an experiment produces.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub metrics: Table,
    /// Additional CSV files, by file name.
    pub tables: Vec<(String, Table)>,
    pub snapshots: Vec<(usize, CompactSet<f64>)>,
}

impl ExperimentRun {
    /// Writes `report.json`, `metrics.csv`, extra tables and
    /// `snapshots/step_<m>.{json,svg}` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir.join("snapshots"))?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&self.report)? + "\n")?;
        self.metrics.write_csv(dir.join(&self.report.metrics_csv))?;
        for (name, t) in &self.tables {
            t.write_csv(dir.join(name))?;
        }
        for (m, set) in &self.snapshots {
            write_set(dir.join("snapshots").join(format!("step_{m}.json")), set)?;
            write_svg(dir.join("snapshots").join(format!("step_{m}.svg")), set)?;
        }
        Ok(())
    }
}

struct RunBuilder {
    id: String,
    parameters: serde_json::Value,
    checks: Vec<Check>,
    certificates: BTreeMap<String, f64>,
    warnings: Vec<String>,
    metrics: Table,
    tables: Vec<(String, Table)>,
    snapshots: Vec<(usize, CompactSet<f64>)>,
}

impl RunBuilder {
    fn new(id: &str, parameters: impl Serialize) -> Result<Self> {
        Ok(RunBuilder {
            id: id.into(),
            parameters: serde_json::to_value(parameters)?,
            checks: Vec::new(),
            certificates: BTreeMap::new(),
            warnings: Vec::new(),
            metrics: Table::default(),
            tables: Vec::new(),
            snapshots: Vec::new(),
        })
    }

    fn cert(&mut self, name: &str, v: f64) {
        self.certificates.insert(name.into(), v);
    }

    fn check(&mut self, c: Check) -> bool {
        let ok = c.passed;
        self.checks.push(c);
        ok
    }

    fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        log::warn!("{}: {w}", self.id);
        self.warnings.push(w);
    }

    fn finish(self, verdict: Verdict) -> ExperimentRun {
        ExperimentRun {
            report: ExperimentReport {
                id: self.id,
                parameters: self.parameters,
                verdict,
                checks: self.checks,
                certificates: self.certificates,
                warnings: self.warnings,
                metrics_csv: "metrics.csv".into(),
            },
            metrics: self.metrics,
            tables: self.tables,
            snapshots: self.snapshots,
        }
    }

    /// Turns an invariant violation inside the trajectory into a failed
    /// report; other errors propagate.
    fn absorb<T>(&mut self, r: Result<T>) -> Result<std::result::Result<T, ()>> {
        match r {
            Ok(v) => Ok(Ok(v)),
            Err(Error::Invariant(msg)) => {
                self.checks.push(Check::new("invariants", false, 1.0, 0.0, msg));
                Ok(Err(()))
            }
            Err(e) => Err(e),
        }
    }
}

fn default_h(k: &CompactSet<f64>, h: Option<f64>) -> Result<f64> {
    let h = h.unwrap_or_else(|| diameter(k) / DEFAULT_CELLS);
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Err(Error::InvalidArgument(format!("raster cell size must be > 0, got {h}")))
    }
}

/// Up to `count` evenly spread stored steps, always including the first
/// and the last.
fn pick_snapshots(traj: &crate::dynamics::Trajectory, count: usize) -> Vec<(usize, CompactSet<f64>)> {
    let n = traj.steps.len();
    let mut idx: Vec<usize> = (0..count.max(2)).map(|i| i * (n - 1) / (count.max(2) - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| (traj.steps[i].m, traj.steps[i].set.clone())).collect()
}

fn from_overrides<P: serde::de::DeserializeOwned + Default + Serialize>(overrides: &serde_json::Value) -> Result<P> {
    let mut base = serde_json::to_value(P::default())?;
    if let (Some(obj), serde_json::Value::Object(over)) = (base.as_object_mut(), overrides) {
        for (k, v) in over {
            if k == "input" {
                continue;
            }
            if !obj.contains_key(k) {
                let known: Vec<&String> = obj.keys().collect();
                return Err(Error::parse(k, format!("unknown parameter; known: {known:?}")));
            }
            obj.insert(k.clone(), v.clone());
        }
    } else if !overrides.is_null() {
        return Err(Error::parse("overrides", "expected a JSON object"));
    }
    serde_json::from_value(base).map_err(|e| Error::parse("overrides", e.to_string()))
}

fn input_override(overrides: &serde_json::Value, default: &str) -> Result<CompactSet<f64>> {
    match overrides.get("input") {
        Some(serde_json::Value::String(s)) => resolve_input(s),
        Some(_) => Err(Error::parse("input", "expected a builtin name or a path")),
        None => builtin_shape(default),
    }
}

/// Runs an experiment by id with parameter overrides given as a JSON
/// object; the key `input` selects a builtin shape or set file.
pub fn reproduce(id: &str, overrides: &serde_json::Value) -> Result<ExperimentRun> {
    match id {
        "ex2.1" => ex_nonconvergence(&from_overrides(overrides)?),
        "thm2.1" => ex_rotated_convergence(&from_overrides(overrides)?),
        "ex2.2" => {
            let p: CertificateParams = from_overrides(overrides)?;
            let k = match overrides.get("input") {
                Some(_) => Some(input_override(overrides, "")?),
                None => None,
            };
            ex_limit_not_ellipse(k.as_ref(), &p)
        }
        "ex2.3" => {
            let p: CertificateParams = from_overrides(overrides)?;
            let k = match overrides.get("input") {
                Some(_) => Some(input_override(overrides, "")?),
                None => None,
            };
            ex_limit_nonconvex(k.as_ref(), &p)
        }
        "thm5.1" => ex_kronecker(&input_override(overrides, "square")?, &from_overrides(overrides)?),
        "sec5-ud" => ex_ud_counterexample(&from_overrides(overrides)?),
        "thm6.1" => ex_klain(&input_override(overrides, "klain")?, &from_overrides(overrides)?),
        other => Err(Error::InvalidArgument(format!(
            "unknown experiment `{other}`; valid ids: {}",
            EXPERIMENT_IDS.join(", ")
        ))),
    }
}
