use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::inputs::{segment_ball, vertical_segment};
use super::{default_h, pick_snapshots, Check, ExperimentRun, RunBuilder, Table, Verdict};
use crate::dynamics::{
    iterate, monitor, pair_diagnostics, tail_hausdorff, IterateOptions, Mode, StoragePlan, Trajectory,
};
use crate::error::{Error, Result};
use crate::geom::{area, diameter, distance_to_set, Point};
use crate::sequences::{discrepancy, ledger, loglog_slope, AngleLedger, DirectionSpec, SquareSum};

/// Tolerance for the exact segment bookkeeping.
const SEGMENT_TOL: f64 = 1e-9;

fn power_law() -> DirectionSpec {
    DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NonconvergenceParams {
    pub spec: DirectionSpec,
    /// Radius of the disc around the segment.
    pub r: f64,
    pub segment_length: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub mode: Mode,
    /// Raster cell size; defaults to `diam(K)/512`.
    pub h: Option<f64>,
    /// Number of lagged pairs sampled over the last 90% of steps.
    pub pairs: usize,
    pub ball_vertices: usize,
}

impl Default for NonconvergenceParams {
    fn default() -> Self {
        NonconvergenceParams {
            spec: power_law(),
            r: 0.1,
            segment_length: 1.0,
            big_m: 5000,
            mode: Mode::Plain,
            h: None,
            pairs: 100,
            ball_vertices: 256,
        }
    }
}

/// For `m` spread over `[M/10, M]`, the earlier step `m'` whose angle
/// `β_{m'}` is closest to `β_m − π/2`: the segment direction has turned by
/// about a right angle in between.
fn quarter_turn_pairs(led: &AngleLedger, big_m: usize, count: usize) -> Vec<(usize, usize)> {
    let beta = |m: usize| if m == 0 { 0.0 } else { led.betas[m - 1] };
    let start = (big_m / 10).max(1);
    let count = count.max(1).min(big_m - start + 1);
    let mut out = Vec::new();
    for i in 0..count {
        let m = if count == 1 { big_m } else { start + i * (big_m - start) / (count - 1) };
        let target = beta(m) - FRAC_PI_2;
        if target < 0.0 {
            continue;
        }
        // betas are nondecreasing for the power law; search 0..=m.
        let k = led.betas[..m].partition_point(|&b| b < target);
        let cands = [k, k + 1];
        let best = cands
            .iter()
            .copied()
            .filter(|&c| c <= m)
            .min_by(|&a, &b| (beta(a) - target).abs().total_cmp(&(beta(b) - target).abs()))
            .expect("nonempty");
        if best < m {
            out.push((best, m));
        }
    }
    out.dedup();
    out
}

struct NonCauchy {
    traj: Trajectory,
    verdict: Verdict,
}

/// The three checks on `ℓ ∪ B_r`: segment bookkeeping, diameter lower
/// bound, and lagged distances (a floor in plain mode, a collapse in
/// rotated mode).
#[allow(clippy::too_many_arguments)]
fn non_cauchy_prong(
    b: &mut RunBuilder,
    spec: &DirectionSpec,
    r: f64,
    len: f64,
    big_m: usize,
    mode: Mode,
    h: Option<f64>,
    pairs: usize,
    ball_vertices: usize,
) -> Result<Option<NonCauchy>> {
    if big_m < 10 {
        return Err(Error::InvalidArgument("M must be at least 10".into()));
    }
    let led = ledger(spec, big_m)?;
    if led.square_sum == SquareSum::Infinite {
        return Err(Error::Hypothesis(format!(
            "{}: sum of squared increments diverges, the segment length tends to 0",
            spec.label()
        )));
    }
    let k = segment_ball(r, len, ball_vertices)?;
    let gamma = led.gamma_target * len;
    let k_area = area(&k);
    if k_area >= PI * (gamma / 2.0).powi(2) {
        return Err(Error::Hypothesis(format!(
            "area(K) = {k_area} is not below the area {} of a disc of diameter gamma",
            PI * (gamma / 2.0).powi(2)
        )));
    }
    let h = default_h(&k, h)?;
    b.cert("h", h);
    b.cert("gamma_target", gamma);
    b.cert("gamma_M", led.gamma_m(big_m) * len);
    b.cert("area_K", k_area);

    let pairs = quarter_turn_pairs(&led, big_m, pairs);
    let mut storage = StoragePlan::default_for(big_m);
    storage.extra = pairs.iter().flat_map(|&(a, c)| [a, c]).collect();
    let opt = IterateOptions {
        storage: Some(storage),
        record_diameter: true,
        ..Default::default()
    };
    let traj = match b.absorb(iterate(&k, spec, big_m, mode, &opt))? {
        Ok(t) => t,
        Err(()) => return Ok(None),
    };
    let seg_opt = IterateOptions {
        storage: Some(StoragePlan::all()),
        ..Default::default()
    };
    let seg = match b.absorb(iterate(&vertical_segment(len), spec, big_m, mode, &seg_opt))? {
        Ok(t) => t,
        Err(()) => return Ok(None),
    };

    // (a) the segment alone has length γ_m, and it stays inside K_m.
    let mut len_err: f64 = 0.0;
    for s in &seg.steps {
        let l = s.set.chains().iter().map(|c| c.length()).sum::<f64>();
        len_err = len_err.max((l - led.gamma_m(s.m) * len).abs());
    }
    let mut inside_err: f64 = 0.0;
    for s in &traj.steps {
        for c in seg.steps[s.m].set.chains() {
            for &p in c.points() {
                inside_err = inside_err.max(distance_to_set(p, &s.set));
            }
        }
    }
    let ok_a = b.check(Check::at_most(
        "segment_length",
        len_err,
        SEGMENT_TOL,
        "max_m |length(l_m) - gamma_m|",
    ));
    let ok_a2 = b.check(Check::at_most(
        "segment_inside",
        inside_err,
        SEGMENT_TOL,
        "max distance from l_m to K_m over stored steps",
    ));

    // (b) diam K_m ≥ |ℓ_m| ≥ γ_M.
    let gamma_m_final = led.gamma_m(big_m) * len;
    let min_diam = traj
        .records
        .iter()
        .filter_map(|r| r.diameter)
        .fold(f64::INFINITY, f64::min);
    let ok_b = b.check(Check::at_least(
        "diameter",
        min_diam,
        gamma_m_final - SEGMENT_TOL,
        "min_m diam(K_m) against gamma_M",
    ));

    // (c) lagged Hausdorff distances.
    let rows = pair_diagnostics(&traj, &pairs, h, false)?;
    let tol = 2.0 * h;
    let floor = rows.iter().map(|r| r.hausdorff).fold(f64::INFINITY, f64::min);
    let sup = rows.iter().map(|r| r.hausdorff).fold(0.0, f64::max);
    b.cert("lagged_floor", floor);
    b.cert("lagged_sup", sup);
    b.cert("raster_tolerance", tol);
    b.cert("lagged_pairs", rows.len() as f64);
    let verdict_c = match mode {
        Mode::Plain => {
            if b.check(Check::at_least(
                "lagged_floor",
                floor,
                10.0 * tol,
                "min over quarter-turn pairs of d_H(K_m', K_m) against 10x raster tolerance",
            )) {
                Verdict::Pass
            } else if floor > tol {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            }
        }
        Mode::Rotated => {
            if b.check(Check::at_most(
                "lagged_collapse",
                sup,
                10.0 * tol,
                "max over quarter-turn pairs of d_H(K_m', K_m) against 10x raster tolerance",
            )) {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    };

    let mut metrics = Table::new(&["m", "alpha", "gamma_m", "segment_length", "diameter", "area", "vertices"]);
    for (rec, s) in traj.records.iter().zip(&seg.records) {
        let l = seg.step(s.m).map(|st| st.set.chains().iter().map(|c| c.length()).sum::<f64>());
        metrics.push(vec![
            rec.m as f64,
            rec.alpha,
            led.gamma_m(rec.m) * len,
            l.unwrap_or(f64::NAN),
            rec.diameter.unwrap_or(f64::NAN),
            rec.area,
            rec.vertex_count as f64,
        ]);
    }
    b.metrics = metrics;
    let mut lagged = Table::new(&["m_from", "m_to", "beta_advance", "hausdorff"]);
    for (&(a, c), row) in pairs.iter().zip(&rows) {
        let beta = |m: usize| if m == 0 { 0.0 } else { led.betas[m - 1] };
        lagged.push(vec![a as f64, c as f64, beta(c) - beta(a), row.hausdorff]);
    }
    b.tables.push(("lagged.csv".into(), lagged));
    b.snapshots = pick_snapshots(&traj, 6);

    let verdict = if !(ok_a && ok_a2 && ok_b) {
        Verdict::Fail
    } else {
        verdict_c
    };
    Ok(Some(NonCauchy { traj, verdict }))
}

/// Example of a trajectory that never settles: `K = ℓ ∪ B_r` under a
/// power-law direction sequence keeps a segment of length about `γ`
/// spinning through infinitely many turns.
pub fn ex_nonconvergence(p: &NonconvergenceParams) -> Result<ExperimentRun> {
    let id = if p.mode == Mode::Rotated { "ex2.1-rotated" } else { "ex2.1" };
    let mut b = RunBuilder::new(id, p)?;
    let verdict = match non_cauchy_prong(
        &mut b,
        &p.spec,
        p.r,
        p.segment_length,
        p.big_m,
        p.mode,
        p.h,
        p.pairs,
        p.ball_vertices,
    )? {
        Some(nc) => nc.verdict,
        None => Verdict::Fail,
    };
    Ok(b.finish(verdict))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RotatedParams {
    pub spec: DirectionSpec,
    pub r: f64,
    pub segment_length: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub h: Option<f64>,
    pub deltas: Vec<f64>,
    pub radii: Vec<f64>,
    /// `y`-coordinates of the anchor targets on the `y`-axis.
    pub anchors: Vec<f64>,
    /// Fraction of steps forming the tail.
    pub tail_fraction: f64,
    /// Tail distance budget as a fraction of `diam(K_0)`.
    pub tail_factor: f64,
    pub ball_vertices: usize,
}

impl Default for RotatedParams {
    fn default() -> Self {
        RotatedParams {
            spec: power_law(),
            r: 0.1,
            segment_length: 1.0,
            big_m: 5000,
            h: None,
            deltas: vec![0.05, 0.2],
            radii: vec![0.05, 0.15, 0.3],
            anchors: vec![0.0, 0.2],
            tail_fraction: 0.1,
            tail_factor: 0.01,
            ball_vertices: 256,
        }
    }
}

/// Rotated symmetrals of `ℓ ∪ B_r`: monotone monitor certificate plus a
/// shrinking tail.
pub fn ex_rotated_convergence(p: &RotatedParams) -> Result<ExperimentRun> {
    let mut b = RunBuilder::new("thm2.1", p)?;
    if p.big_m == 0 {
        return Err(Error::InvalidArgument("M must be >= 1".into()));
    }
    if !(p.tail_fraction > 0.0 && p.tail_fraction <= 1.0) {
        return Err(Error::InvalidArgument("tail_fraction must lie in (0, 1]".into()));
    }
    let led = ledger(&p.spec, p.big_m)?;
    if led.square_sum == SquareSum::Infinite {
        return Err(Error::Hypothesis(format!(
            "{}: increments are not square summable",
            p.spec.label()
        )));
    }
    let k = segment_ball(p.r, p.segment_length, p.ball_vertices)?;
    let h = default_h(&k, p.h)?;
    let anchors: Vec<Point<f64>> = p.anchors.iter().map(|&y| Point::new(0.0, y)).collect();
    let tail = ((p.big_m as f64 * p.tail_fraction).ceil() as usize).max(1);
    let opt = IterateOptions {
        storage: Some(StoragePlan {
            dense_tail: tail,
            ..StoragePlan::default_for(p.big_m)
        }),
        anchors: anchors.clone(),
        ..Default::default()
    };
    let traj = match b.absorb(iterate(&k, &p.spec, p.big_m, Mode::Rotated, &opt))? {
        Ok(t) => t,
        Err(()) => return Ok(b.finish(Verdict::Fail)),
    };
    let diam0 = diameter(&k);
    b.cert("h", h);
    b.cert("diameter_K0", diam0);
    b.cert("gamma_target", led.gamma_target * p.segment_length);

    let table = monitor(&traj, &p.deltas, &p.radii, &anchors, h)?;
    let violations = table.violations();
    let mut worst_ratio = f64::NEG_INFINITY;
    for mi in 1..table.ms.len() {
        for d in 0..table.deltas.len() {
            let tol = table.tolerance(mi - 1, d).max(table.tolerance(mi, d));
            for r in 0..table.radii.len() {
                for a in 0..table.anchors.len() {
                    let inc = table.value(mi, d, r, a) - table.value(mi - 1, d, r, a);
                    worst_ratio = worst_ratio.max(inc / tol);
                }
            }
        }
    }
    b.cert("monitor_worst_increase_over_tolerance", worst_ratio);
    let ok_monitor = b.check(Check::at_most(
        "monitor_nonincreasing",
        violations.len() as f64,
        0.0,
        "increases beyond 6h(L + 2 pi delta) over all (delta, r, anchor) rows",
    ));

    let from = p.big_m + 1 - tail;
    let rows = tail_hausdorff(&traj, from, h, false)?;
    let tail_max = rows.iter().map(|r| r.hausdorff).fold(0.0, f64::max);
    let budget = p.tail_factor * diam0 + 2.0 * h;
    b.cert("tail_max_hausdorff", tail_max);
    let ok_tail = b.check(Check::at_most(
        "tail_hausdorff",
        tail_max,
        budget,
        "max over the tail of d_H(K_m, K_M)",
    ));

    let mut metrics = Table::new(&["m", "hausdorff_to_last"]);
    for r in &rows {
        metrics.push(vec![r.m as f64, r.hausdorff]);
    }
    b.metrics = metrics;
    let mut mon = Table::new(&["m", "delta", "r", "anchor", "value"]);
    for (mi, &m) in table.ms.iter().enumerate() {
        for (d, &delta) in table.deltas.iter().enumerate() {
            for (ri, &radius) in table.radii.iter().enumerate() {
                for (a, &y) in p.anchors.iter().enumerate() {
                    mon.push(vec![m as f64, delta, radius, y, table.value(mi, d, ri, a)]);
                }
            }
        }
    }
    b.tables.push(("monitor.csv".into(), mon));
    b.snapshots = pick_snapshots(&traj, 6);
    let verdict = if ok_monitor && ok_tail { Verdict::Pass } else { Verdict::Fail };
    Ok(b.finish(verdict))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UdParams {
    pub theta: f64,
    pub sigma: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    /// Sample sizes for the discrepancy fit.
    pub ns: Vec<usize>,
    pub slope_tol: f64,
    pub r: f64,
    pub h: Option<f64>,
    pub pairs: usize,
}

impl Default for UdParams {
    fn default() -> Self {
        UdParams {
            theta: 0.5,
            sigma: 0.75,
            big_m: 2000,
            ns: vec![100, 1000, 10_000, 100_000],
            slope_tol: 0.1,
            r: 0.1,
            h: None,
            pairs: 60,
        }
    }
}

/// Uniformly distributed directions whose symmetrals still fail to
/// converge: a discrepancy decay fit plus the non-Cauchy floor.
pub fn ex_ud_counterexample(p: &UdParams) -> Result<ExperimentRun> {
    let spec = DirectionSpec::PowerLaw {
        theta: p.theta,
        sigma: p.sigma,
    };
    spec.validate().map_err(|e| Error::Hypothesis(e.to_string()))?;
    let mut b = RunBuilder::new("sec5-ud", p)?;
    if p.sigma > 0.95 {
        b.warn(format!(
            "sigma = {} is close to 1: beta_m grows like m^(1 - sigma) and winds around the circle very slowly",
            p.sigma
        ));
    }
    if p.ns.len() < 2 {
        return Err(Error::InvalidArgument("need at least two sample sizes".into()));
    }
    let mut table = Table::new(&["N", "discrepancy", "discrepancy_times_N_sigma"]);
    let mut ds = Vec::new();
    for &n in &p.ns {
        let d = discrepancy(&spec, n)?;
        table.push(vec![n as f64, d, d * (n as f64).powf(p.sigma)]);
        ds.push(d);
    }
    let xs: Vec<f64> = p.ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &ds);
    b.cert("discrepancy_slope", slope);
    b.cert("expected_slope", -p.sigma);
    let ok_slope = b.check(Check::at_most(
        "discrepancy_slope",
        (slope + p.sigma).abs(),
        p.slope_tol,
        format!("|fitted log-log slope ({slope:.4}) + sigma|"),
    ));
    b.tables.push(("discrepancy.csv".into(), table));

    let prong = non_cauchy_prong(&mut b, &spec, p.r, 1.0, p.big_m, Mode::Plain, p.h, p.pairs, 256)?;
    let floor_verdict = prong.map(|nc| {
        debug_assert_eq!(nc.traj.mode, Mode::Plain);
        nc.verdict
    });
    let verdict = match (ok_slope, floor_verdict) {
        (_, None) => Verdict::Fail,
        (true, Some(v)) => v,
        (false, Some(_)) => Verdict::Fail,
    };
    Ok(b.finish(verdict))
}
