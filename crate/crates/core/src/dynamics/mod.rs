//! Iterated symmetrization trajectories.
//!
//! Plain mode applies `S_{u_m}` in the fixed frame. Rotated mode follows
//! every step with the rotation that brings the current direction back to
//! `e1`, so each stored set is symmetric about the `y`-axis and the
//! trajectory converges whenever `Σ α_m²` does.

mod diagnostics;
mod output;

use std::f64::consts::{FRAC_PI_2, PI};

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{area, diameter, rotate, simplify, CompactSet, Direction, Point};
use crate::sequences::{ledger, AngleLedger, DirectionSpec, SquareSum};
use crate::symmetrize::{is_symmetric, steiner_symmetral};

pub use diagnostics::{
    anchor_label, cauchy_diagnostics, estimate_limit, hausdorff_to, pair_diagnostics, monitor, tail_hausdorff, CauchyRow, LimitEstimate,
    MonitorTable, MonitorViolation, TailRow,
};
pub use output::{write_cauchy_csv, write_checkpoints, write_monitor_csv, write_records_csv, CheckpointManifest};

/// Relative area drift allowed per step.
pub const AREA_DRIFT_PER_STEP: f64 = 1e-8;
/// Symmetric-difference tolerance for the rotated-mode symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Plain,
    Rotated,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Mode::Plain),
            "rotated" => Ok(Mode::Rotated),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}` (plain | rotated)"))),
        }
    }
}

/// Which steps keep their set: `m = 0`, multiples of `keep_every`, the last
/// `dense_tail` steps, any listed `extra` steps, and `M` itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoragePlan {
    pub keep_every: usize,
    pub dense_tail: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<usize>,
}

impl StoragePlan {
    /// Every step stored.
    pub fn all() -> Self {
        StoragePlan {
            keep_every: 1,
            dense_tail: 0,
            extra: Vec::new(),
        }
    }

    /// About 100 thinned snapshots plus the last 10% of steps.
    pub fn default_for(big_m: usize) -> Self {
        StoragePlan {
            keep_every: (big_m / 100).max(1),
            dense_tail: big_m.div_ceil(10),
            extra: Vec::new(),
        }
    }

    pub fn keeps(&self, m: usize, big_m: usize) -> bool {
        m == 0
            || m == big_m
            || m % self.keep_every.max(1) == 0
            || m + self.dense_tail > big_m
            || self.extra.binary_search(&m).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct IterateOptions {
    pub storage: Option<StoragePlan>,
    /// Collinearity tolerance used to merge vertices after each step.
    pub simplify_tol: f64,
    /// Compute the diameter of every step (costs a hull per step).
    pub record_diameter: bool,
    /// Anchor targets `q` on the `y`-axis whose paths `p_m` are stored.
    pub anchors: Vec<Point<f64>>,
    /// Test hook: perturb the area at this step to trip the invariant check.
    pub inject_area_fault: Option<usize>,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions {
            storage: None,
            simplify_tol: 1e-9,
            record_diameter: false,
            anchors: Vec::new(),
            inject_area_fault: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryStep {
    pub m: usize,
    pub u: Direction<f64>,
    /// Rotation applied after the symmetrization at this step.
    pub rotation_applied: f64,
    pub set: CompactSet<f64>,
    pub anchor_points: Option<Vec<Point<f64>>>,
}

/// Cheap metadata recorded at every step, stored or not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub m: usize,
    /// Angle of `u_m` in the fixed frame.
    pub theta: f64,
    pub alpha: f64,
    pub rotation_applied: f64,
    /// Total rotation `ρ_m` accumulated so far.
    pub rotation_total: f64,
    pub area: f64,
    pub vertex_count: usize,
    pub diameter: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub mode: Mode,
    pub spec: DirectionSpec,
    pub big_m: usize,
    pub ledger: AngleLedger,
    pub storage: StoragePlan,
    pub anchor_targets: Vec<Point<f64>>,
    pub steps: Vec<TrajectoryStep>,
    pub records: Vec<StepRecord>,
}

impl Trajectory {
    pub fn initial(&self) -> &TrajectoryStep {
        &self.steps[0]
    }

    pub fn last(&self) -> &TrajectoryStep {
        self.steps.last().expect("trajectory has step 0")
    }

    pub fn step(&self, m: usize) -> Option<&TrajectoryStep> {
        self.steps.binary_search_by_key(&m, |s| s.m).ok().map(|i| &self.steps[i])
    }

    pub fn stored(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.m)
    }

    /// Anchor positions `p_m` of each target `q` at every stored step, in
    /// one pass over the steps. Rotated mode scales by `γ_m/γ_target`; in
    /// plain mode a ball center follows the symmetrals by projection onto
    /// `u_m⊥`.
    pub fn anchor_paths(&self, qs: &[Point<f64>]) -> Vec<Vec<Point<f64>>> {
        let mut cur: Vec<Point<f64>> = match self.mode {
            Mode::Rotated => qs.iter().map(|q| q.scale(1.0 / self.ledger.gamma_target)).collect(),
            Mode::Plain => qs.to_vec(),
        };
        let mut out = Vec::with_capacity(self.steps.len());
        let mut next = self.steps.iter().map(|s| s.m).peekable();
        for m in 0..=self.big_m {
            if m > 0 {
                match self.mode {
                    Mode::Rotated => {
                        let c = self.ledger.alpha(m).cos();
                        cur.iter_mut().for_each(|p| *p = p.scale(c));
                    }
                    Mode::Plain => {
                        let n = self.spec.direction(m).unit();
                        cur.iter_mut().for_each(|p| *p = *p - n * p.dot(n));
                    }
                }
            }
            if next.peek() == Some(&m) {
                next.next();
                out.push(cur.clone());
            }
        }
        out
    }
}

/// Anchor path of a target `q` in rotated mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorTracker {
    pub q: Point<f64>,
    /// `p_0, …, p_M`.
    pub points: Vec<Point<f64>>,
}

/// `p_0 = q/γ_target`, `p_m = cos α_m · p_{m−1}`.
pub fn track_anchors(spec: &DirectionSpec, big_m: usize, qs: &[Point<f64>]) -> Result<Vec<AnchorTracker>> {
    let led = ledger(spec, big_m)?;
    qs.iter()
        .map(|&q| {
            if q.x != 0.0 {
                return Err(Error::InvalidArgument(format!("anchor target ({}, {}) is not on the y-axis", q.x, q.y)));
            }
            let mut p = q.scale(1.0 / led.gamma_target);
            let mut points = Vec::with_capacity(big_m + 1);
            points.push(p);
            for a in &led.alphas {
                p = p.scale(a.cos());
                points.push(p);
            }
            Ok(AnchorTracker { q, points })
        })
        .collect()
}

pub fn iterate_plain(set: &CompactSet<f64>, spec: &DirectionSpec, big_m: usize) -> Result<Trajectory> {
    iterate(set, spec, big_m, Mode::Plain, &IterateOptions::default())
}

pub fn iterate_rotated(set: &CompactSet<f64>, spec: &DirectionSpec, big_m: usize) -> Result<Trajectory> {
    iterate(set, spec, big_m, Mode::Rotated, &IterateOptions::default())
}

/// Wraps an angle into `(−π/2, π/2]`, i.e. picks the sign of `±u`.
fn half_turn_wrap(a: f64) -> f64 {
    let mut x = a.rem_euclid(PI);
    if x > FRAC_PI_2 {
        x -= PI;
    }
    x
}

pub fn iterate(
    set: &CompactSet<f64>,
    spec: &DirectionSpec,
    big_m: usize,
    mode: Mode,
    opt: &IterateOptions,
) -> Result<Trajectory> {
    if big_m == 0 {
        return Err(Error::InvalidArgument("M must be >= 1".into()));
    }
    if set.is_empty() {
        return Err(Error::EmptySet("cannot iterate the empty set".into()));
    }
    let led = ledger(spec, big_m)?;
    if mode == Mode::Rotated && led.square_sum == SquareSum::Infinite {
        warn!("{}: sum of squared increments diverges; rotated iteration need not converge", spec.label());
    }
    if mode == Mode::Rotated {
        if let Some(q) = opt.anchors.iter().find(|q| q.x != 0.0) {
            return Err(Error::InvalidArgument(format!("anchor target ({}, {}) is not on the y-axis", q.x, q.y)));
        }
    }
    let mut storage = opt.storage.clone().unwrap_or_else(|| StoragePlan::default_for(big_m));
    storage.extra.sort_unstable();
    storage.extra.dedup();
    let area0 = area(set);
    let scale = area0.max(1.0);
    let anchors_on = !opt.anchors.is_empty();

    let mut anchor_now = match mode {
        Mode::Rotated => opt.anchors.iter().map(|q| q.scale(1.0 / led.gamma_target)).collect(),
        Mode::Plain => opt.anchors.clone(),
    };
    let mut steps = vec![TrajectoryStep {
        m: 0,
        u: Direction::e1(),
        rotation_applied: 0.0,
        set: set.clone(),
        anchor_points: anchors_on.then(|| anchor_now.clone()),
    }];
    let mut records = vec![StepRecord {
        m: 0,
        theta: 0.0,
        alpha: 0.0,
        rotation_applied: 0.0,
        rotation_total: 0.0,
        area: area0,
        vertex_count: set.vertex_count(),
        diameter: opt.record_diameter.then(|| diameter(set)),
    }];

    let mut k = set.clone();
    let mut rho = 0.0;
    for m in 1..=big_m {
        let theta = spec.angle(m);
        let u = Direction::new(theta);
        let mut applied = 0.0;
        match mode {
            Mode::Plain => {
                k = simplify(&steiner_symmetral(&k, u), opt.simplify_tol);
                let n = u.unit();
                for p in anchor_now.iter_mut() {
                    *p = *p - n * p.dot(n);
                }
            }
            Mode::Rotated => {
                let phi = half_turn_wrap(theta + rho);
                if phi == 0.0 || phi.abs() >= FRAC_PI_2 {
                    return Err(Error::Hypothesis(format!(
                        "step {m}: increment {} rad is outside (0, pi/2)",
                        phi.abs()
                    )));
                }
                let sym = steiner_symmetral(&k, Direction::new(phi));
                k = simplify(&rotate(&sym, -phi), opt.simplify_tol);
                applied = -phi;
                rho -= phi;
                let c = led.alpha(m).cos();
                for p in anchor_now.iter_mut() {
                    *p = p.scale(c);
                }
            }
        }
        if opt.inject_area_fault == Some(m) {
            k = k.map_points(|p| p.scale(1.01));
        }
        let a = area(&k);
        let budget = AREA_DRIFT_PER_STEP * m as f64 * scale;
        if (a - area0).abs() > budget {
            return Err(Error::Invariant(format!(
                "step {m}: area drifted by {:e} (budget {budget:e})",
                a - area0
            )));
        }
        let keep = storage.keeps(m, big_m);
        if keep && mode == Mode::Rotated && !is_symmetric(&k, Direction::e1(), SYMMETRY_TOL) {
            return Err(Error::Invariant(format!("step {m}: rotated set is not symmetric about the y-axis")));
        }
        records.push(StepRecord {
            m,
            theta: u.theta(),
            alpha: led.alpha(m),
            rotation_applied: applied,
            rotation_total: rho,
            area: a,
            vertex_count: k.vertex_count(),
            diameter: opt.record_diameter.then(|| diameter(&k)),
        });
        if keep {
            steps.push(TrajectoryStep {
                m,
                u,
                rotation_applied: applied,
                set: k.clone(),
                anchor_points: anchors_on.then(|| anchor_now.clone()),
            });
        }
        if m % 500 == 0 {
            debug!("step {m}/{big_m}: {} vertices", k.vertex_count());
        }
    }
    Ok(Trajectory {
        mode,
        spec: spec.clone(),
        big_m,
        ledger: led,
        storage,
        anchor_targets: opt.anchors.clone(),
        steps,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_picks_the_acute_representative() {
        assert!((half_turn_wrap(3.0) - (3.0 - PI)).abs() < 1e-15);
        assert_eq!(half_turn_wrap(FRAC_PI_2), FRAC_PI_2);
        assert!((half_turn_wrap(-0.2) + 0.2).abs() < 1e-15);
        assert!((half_turn_wrap(PI + 0.1) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn storage_plan_keeps_ends_and_tail() {
        let p = StoragePlan {
            keep_every: 10,
            dense_tail: 3,
            extra: vec![7],
        };
        let kept: Vec<usize> = (0..=25).filter(|&m| p.keeps(m, 25)).collect();
        assert_eq!(kept, vec![0, 7, 10, 20, 23, 24, 25]);
    }
}
