use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::clip::symdiff_area;
use crate::error::{Error, Result};
use crate::geom::{boundary_length, Ball, CompactSet, Point};
use crate::raster::{hausdorff, monitor_count, parallel_set, rasterize, Grid};

/// `λ((K_m)_δ ∖ B_{r,p_m})` at every stored step, for each `(δ, r, anchor)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorTable {
    pub h: f64,
    pub deltas: Vec<f64>,
    pub radii: Vec<f64>,
    pub anchors: Vec<String>,
    pub ms: Vec<usize>,
    /// Flattened `[m][δ][r][anchor]`.
    pub values: Vec<f64>,
    /// Raster tolerance `6h(L(K_m) + 2πδ)`, flattened `[m][δ]`.
    pub tolerances: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorViolation {
    pub m: usize,
    pub delta: f64,
    pub r: f64,
    pub anchor: String,
    pub increase: f64,
    pub tolerance: f64,
}

impl MonitorTable {
    fn idx(&self, mi: usize, d: usize, r: usize, a: usize) -> usize {
        ((mi * self.deltas.len() + d) * self.radii.len() + r) * self.anchors.len() + a
    }

    pub fn value(&self, mi: usize, d: usize, r: usize, a: usize) -> f64 {
        self.values[self.idx(mi, d, r, a)]
    }

    pub fn tolerance(&self, mi: usize, d: usize) -> f64 {
        self.tolerances[mi * self.deltas.len() + d]
    }

    /// One row of the table: the values along the stored steps.
    pub fn row(&self, d: usize, r: usize, a: usize) -> Vec<f64> {
        (0..self.ms.len()).map(|mi| self.value(mi, d, r, a)).collect()
    }

    /// Consecutive increases larger than the raster tolerance.
    pub fn violations(&self) -> Vec<MonitorViolation> {
        let mut out = Vec::new();
        for mi in 1..self.ms.len() {
            for d in 0..self.deltas.len() {
                let tol = self.tolerance(mi - 1, d).max(self.tolerance(mi, d));
                for r in 0..self.radii.len() {
                    for a in 0..self.anchors.len() {
                        let inc = self.value(mi, d, r, a) - self.value(mi - 1, d, r, a);
                        if inc > tol {
                            out.push(MonitorViolation {
                                m: self.ms[mi],
                                delta: self.deltas[d],
                                r: self.radii[r],
                                anchor: self.anchors[a].clone(),
                                increase: inc,
                                tolerance: tol,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.violations().is_empty()
    }
}

pub fn anchor_label(q: Point<f64>) -> String {
    format!("q=({},{})", q.x, q.y)
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("raster cell size must be > 0, got {h}")))
    }
}

/// Evaluates the monotone functional at every stored step. Ball centers
/// follow [`Trajectory::anchor_paths`].
pub fn monitor(traj: &Trajectory, deltas: &[f64], radii: &[f64], anchors: &[Point<f64>], h: f64) -> Result<MonitorTable> {
    check_h(h)?;
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::InvalidArgument(format!("monitor deltas must be > 0, got {d}")));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::InvalidArgument(format!("monitor radii must be > 0, got {r}")));
    }
    let paths = traj.anchor_paths(anchors);
    let mut values = Vec::new();
    let mut tolerances = Vec::new();
    for (step, centers) in traj.steps.iter().zip(&paths) {
        let g = rasterize(&step.set, h)?;
        let len = boundary_length(&step.set);
        for &delta in deltas {
            tolerances.push(6.0 * h * (len + 2.0 * PI * delta));
            let k = parallel_set(&g, delta)?;
            for &r in radii {
                for &c in centers {
                    values.push(monitor_count(&k, &Ball::new(c, r)?));
                }
            }
        }
    }
    Ok(MonitorTable {
        h,
        deltas: deltas.to_vec(),
        radii: radii.to_vec(),
        anchors: anchors.iter().map(|&q| anchor_label(q)).collect(),
        ms: traj.stored().collect(),
        values,
        tolerances,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyRow {
    pub m: usize,
    pub lag: usize,
    pub hausdorff: f64,
    pub symdiff: f64,
}

fn compare(a: &CompactSet<f64>, ga: &Grid<f64>, b: &CompactSet<f64>, h: f64, exact: bool) -> Result<(f64, f64)> {
    let gb = rasterize(b, h)?;
    let d = hausdorff(ga, &gb)?;
    let s = if exact { symdiff_area(a, b) } else { f64::NAN };
    Ok((d, s))
}

/// `d_H` (raster, error ≤ 2h) and exact symmetric difference between
/// `K_m` and `K_{m+lag}` for every stored pair.
pub fn cauchy_diagnostics(traj: &Trajectory, lags: &[usize], h: f64) -> Result<Vec<CauchyRow>> {
    let pairs: Vec<(usize, usize)> = traj
        .steps
        .iter()
        .flat_map(|s| lags.iter().map(move |&lag| (s.m, s.m + lag)))
        .filter(|&(_, b)| traj.step(b).is_some())
        .collect();
    pair_diagnostics(traj, &pairs, h, true)
}

/// Same as [`cauchy_diagnostics`] for explicit `(m, m')` pairs of stored
/// steps; the symmetric difference is left as NaN unless `exact`.
pub fn pair_diagnostics(traj: &Trajectory, pairs: &[(usize, usize)], h: f64, exact: bool) -> Result<Vec<CauchyRow>> {
    check_h(h)?;
    let mut rows = Vec::with_capacity(pairs.len());
    let mut cached: Option<(usize, Grid<f64>)> = None;
    for &(a, b) in pairs {
        let missing = |m: usize| Error::InvalidArgument(format!("step {m} is not stored"));
        let sa = traj.step(a).ok_or_else(|| missing(a))?;
        let sb = traj.step(b).ok_or_else(|| missing(b))?;
        if cached.as_ref().map(|c| c.0) != Some(a) {
            cached = Some((a, rasterize(&sa.set, h)?));
        }
        let ga = &cached.as_ref().expect("just filled").1;
        let (d, s) = compare(&sa.set, ga, &sb.set, h, exact)?;
        rows.push(CauchyRow {
            m: a,
            lag: b.abs_diff(a),
            hausdorff: d,
            symdiff: s,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub m: usize,
    pub hausdorff: f64,
    pub symdiff: f64,
}

/// Distances from every stored `K_m` with `m ≥ from` to a fixed set. The
/// symmetric difference is computed only when `exact` is set.
pub fn hausdorff_to(traj: &Trajectory, target: &CompactSet<f64>, from: usize, h: f64, exact: bool) -> Result<Vec<TailRow>> {
    check_h(h)?;
    let gt = rasterize(target, h)?;
    traj.steps
        .iter()
        .filter(|s| s.m >= from)
        .map(|s| {
            let (d, sd) = compare(target, &gt, &s.set, h, exact)?;
            Ok(TailRow {
                m: s.m,
                hausdorff: d,
                symdiff: sd,
            })
        })
        .collect()
}

/// Distances from stored `K_m`, `m ≥ from`, to the last stored set.
pub fn tail_hausdorff(traj: &Trajectory, from: usize, h: f64, exact: bool) -> Result<Vec<TailRow>> {
    hausdorff_to(traj, &traj.last().set, from, h, exact)
}

#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub m: usize,
    pub set: CompactSet<f64>,
    /// Largest tail distance to the last set.
    pub tail_max: f64,
    /// `tail_max + 2h`.
    pub error: f64,
}

/// `K_M` with an error bar from the spread of the stored tail.
pub fn estimate_limit(traj: &Trajectory, tail_start: usize, h: f64) -> Result<LimitEstimate> {
    let rows = tail_hausdorff(traj, tail_start, h, false)?;
    let tail_max = rows.iter().map(|r| r.hausdorff).fold(0.0, f64::max);
    let last = traj.last();
    Ok(LimitEstimate {
        m: last.m,
        set: last.set.clone(),
        tail_max,
        error: tail_max + 2.0 * h,
    })
}
