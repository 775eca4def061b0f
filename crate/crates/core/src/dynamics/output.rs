use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CauchyRow, Mode, MonitorTable, StepRecord, StoragePlan, Trajectory, AREA_DRIFT_PER_STEP, SYMMETRY_TOL};
use crate::error::{Error, Result};
use crate::geom::{write_set, Point};
use crate::sequences::{DirectionSpec, Schedule};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointManifest {
    pub mode: Mode,
    pub spec: DirectionSpec,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub seeds: Vec<u64>,
    pub storage: StoragePlan,
    pub area_drift_per_step: f64,
    pub symmetry_tol: f64,
    pub gamma_target: f64,
    pub anchors: Vec<Point<f64>>,
    pub steps: Vec<usize>,
}

fn seeds(spec: &DirectionSpec) -> Vec<u64> {
    match spec {
        DirectionSpec::Iid { seed } => vec![*seed],
        DirectionSpec::FiniteSet {
            schedule: Schedule::Random { seed },
            ..
        } => vec![*seed],
        _ => Vec::new(),
    }
}

/// Writes `step_<m>.json` for every stored step and `manifest.json` into
/// `dir`.
pub fn write_checkpoints(traj: &Trajectory, dir: impl AsRef<Path>) -> Result<CheckpointManifest> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    for s in &traj.steps {
        write_set(dir.join(format!("step_{}.json", s.m)), &s.set)?;
    }
    let manifest = CheckpointManifest {
        mode: traj.mode,
        spec: traj.spec.clone(),
        big_m: traj.big_m,
        seeds: seeds(&traj.spec),
        storage: traj.storage.clone(),
        area_drift_per_step: AREA_DRIFT_PER_STEP,
        symmetry_tol: SYMMETRY_TOL,
        gamma_target: traj.ledger.gamma_target,
        anchors: traj.anchor_targets.clone(),
        steps: traj.stored().collect(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(manifest)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

#[derive(Serialize)]
struct MonitorRow<'a> {
    m: usize,
    delta: f64,
    r: f64,
    anchor: &'a str,
    value: f64,
}

pub fn write_monitor_csv(table: &MonitorTable, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for (mi, &m) in table.ms.iter().enumerate() {
        for (d, &delta) in table.deltas.iter().enumerate() {
            for (r, &radius) in table.radii.iter().enumerate() {
                for (a, anchor) in table.anchors.iter().enumerate() {
                    w.serialize(MonitorRow {
                        m,
                        delta,
                        r: radius,
                        anchor,
                        value: table.value(mi, d, r, a),
                    })
                    .map_err(csv_err)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_cauchy_csv(rows: &[CauchyRow], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_csv(records: &[StepRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
