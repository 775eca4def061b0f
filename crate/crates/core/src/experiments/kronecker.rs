use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::{default_h, pick_snapshots, Check, ExperimentRun, RunBuilder, Table, Verdict};
use crate::clip::symdiff_area;
use crate::dynamics::{hausdorff_to, iterate, tail_hausdorff, IterateOptions, Mode, StoragePlan, TailRow};
use crate::error::{Error, Result};
use crate::geom::{diameter, equimeasurable_ball, reflect, BallFit, CompactSet, Direction};
use crate::raster::{hausdorff, rasterize};
use crate::sequences::{rational_multiple_of_pi, DirectionSpec, Schedule};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KroneckerParams {
    pub alpha: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub h: Option<f64>,
    pub tail_fraction: f64,
    /// Final distance budget as a fraction of `diam(K)`.
    pub factor: f64,
    /// Vertices of the polygonal stand-in for the target ball.
    pub ball_vertices: usize,
    /// Largest denominator tried when testing `α/π` for rationality.
    pub max_denominator: u32,
}

impl Default for KroneckerParams {
    fn default() -> Self {
        KroneckerParams {
            alpha: 1.0,
            big_m: 2000,
            h: None,
            tail_fraction: 0.1,
            factor: 0.02,
            ball_vertices: 1024,
            max_denominator: 64,
        }
    }
}

/// Raster `d_H(L, reflect(L, v))` and the exact symmetric difference.
fn mirror_distance(l: &CompactSet<f64>, v: f64, h: f64) -> Result<(f64, f64)> {
    let m = reflect(l, Direction::new(v));
    let d = hausdorff(&rasterize(l, h)?, &rasterize(&m, h)?)?;
    Ok((d, symdiff_area(l, &m)))
}

fn symmetry_checks(b: &mut RunBuilder, l: &CompactSet<f64>, dirs: &[f64], tol: f64, h: f64) -> Result<bool> {
    let mut all = true;
    let mut table = Table::new(&["direction", "hausdorff_to_mirror", "symdiff_to_mirror"]);
    for &v in dirs {
        let (d, s) = mirror_distance(l, v, h)?;
        table.push(vec![v, d, s]);
        all &= b.check(Check::at_most(
            &format!("symmetric_about_{v:.6}"),
            d,
            tol,
            "raster d_H between the limit and its mirror image across v-perp",
        ));
    }
    b.tables.push(("symmetry.csv".into(), table));
    Ok(all)
}

fn series_table(rows: &[TailRow]) -> Table {
    let mut t = Table::new(&["m", "hausdorff", "symdiff"]);
    for r in rows {
        t.push(vec![r.m as f64, r.hausdorff, r.symdiff]);
    }
    t
}

/// Kronecker directions `mα`: the symmetrals approach the centered ball
/// of the same area.
pub fn ex_kronecker(k: &CompactSet<f64>, p: &KroneckerParams) -> Result<ExperimentRun> {
    let mut b = RunBuilder::new("thm5.1", p)?;
    if p.big_m == 0 || !(p.tail_fraction > 0.0 && p.tail_fraction <= 1.0) {
        return Err(Error::InvalidArgument("need M >= 1 and tail_fraction in (0, 1]".into()));
    }
    let spec = DirectionSpec::Kronecker { alpha: p.alpha };
    spec.validate()?;
    let rational = rational_multiple_of_pi(p.alpha, p.max_denominator);
    if let Some((num, den)) = rational {
        b.warn(format!(
            "alpha = {num} pi / {den} is a rational multiple of pi: outside the hypothesis, the limit is only symmetric under a finite group"
        ));
    }
    let target = equimeasurable_ball(k)?.to_set(p.ball_vertices, BallFit::Inscribed);
    let h = default_h(k, p.h)?;
    let diam = diameter(k);
    let tol = p.factor * diam + 2.0 * h;
    b.cert("h", h);
    b.cert("diameter_K", diam);
    b.cert("tolerance", tol);

    let tail = ((p.big_m as f64 * p.tail_fraction).ceil() as usize).clamp(1, p.big_m);
    let opt = IterateOptions {
        storage: Some(StoragePlan {
            dense_tail: tail,
            ..StoragePlan::default_for(p.big_m)
        }),
        ..Default::default()
    };
    let traj = match b.absorb(iterate(k, &spec, p.big_m, Mode::Plain, &opt))? {
        Ok(t) => t,
        Err(()) => return Ok(b.finish(Verdict::Fail)),
    };
    let rows = hausdorff_to(&traj, &target, 0, h, true)?;
    let last = rows.last().expect("step M is stored");
    b.cert("final_hausdorff", last.hausdorff);
    b.cert("final_symdiff", last.symdiff);
    b.cert("initial_hausdorff", rows[0].hausdorff);

    if let Some((num, den)) = rational {
        // Directions kα mod π repeat with period at most 2·den.
        let mut dirs: Vec<f64> = (1..=2 * den as i64)
            .map(|j| (j as f64 * num as f64 * PI / den as f64).rem_euclid(PI))
            .collect();
        dirs.sort_by(f64::total_cmp);
        dirs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        symmetry_checks(&mut b, &traj.last().set, &dirs, tol, h)?;
        b.metrics = series_table(&rows);
        b.snapshots = pick_snapshots(&traj, 6);
        return Ok(b.finish(Verdict::Inconclusive));
    }

    let ok_final = b.check(Check::at_most(
        "final_hausdorff",
        last.hausdorff,
        tol,
        "d_H(K_M, K*) against factor diam(K) + 2h",
    ));
    // Tail trend: no value rises more than the raster tolerance above the
    // best value seen earlier in the tail.
    let from = p.big_m + 1 - tail;
    let mut best = f64::INFINITY;
    let mut worst_rise: f64 = 0.0;
    for r in rows.iter().filter(|r| r.m >= from) {
        if best.is_finite() {
            worst_rise = worst_rise.max(r.hausdorff - best);
        }
        best = best.min(r.hausdorff);
    }
    b.cert("tail_worst_rise", worst_rise);
    let ok_trend = b.check(Check::at_most(
        "tail_nonincreasing",
        worst_rise,
        2.0 * h,
        "largest rise of d_H(K_m, K*) over the running tail minimum",
    ));
    b.metrics = series_table(&rows);
    b.snapshots = pick_snapshots(&traj, 6);
    Ok(b.finish(if ok_final && ok_trend { Verdict::Pass } else { Verdict::Fail }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KlainParams {
    pub directions: Vec<f64>,
    pub schedule: Schedule,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub h: Option<f64>,
    pub tail_fraction: f64,
    /// Cauchy and symmetry budget as a fraction of `diam(K)`.
    pub factor: f64,
}

impl Default for KlainParams {
    fn default() -> Self {
        KlainParams {
            directions: vec![0.0, FRAC_PI_4, FRAC_PI_2],
            schedule: Schedule::RoundRobin,
            big_m: 600,
            h: None,
            tail_fraction: 0.1,
            factor: 0.01,
        }
    }
}

/// Directions from a finite set: the symmetrals settle on a set symmetric
/// about every direction used infinitely often.
pub fn ex_klain(k: &CompactSet<f64>, p: &KlainParams) -> Result<ExperimentRun> {
    let mut b = RunBuilder::new("thm6.1", p)?;
    if p.big_m == 0 || !(p.tail_fraction > 0.0 && p.tail_fraction <= 1.0) {
        return Err(Error::InvalidArgument("need M >= 1 and tail_fraction in (0, 1]".into()));
    }
    let spec = DirectionSpec::FiniteSet {
        directions: p.directions.clone(),
        schedule: p.schedule.clone(),
    };
    spec.validate()?;
    let recurring: Vec<f64> = match &p.schedule {
        Schedule::Indices { indices } => {
            let mut ix = indices.clone();
            ix.sort_unstable();
            ix.dedup();
            ix.into_iter().map(|i| p.directions[i]).collect()
        }
        _ => p.directions.clone(),
    };
    let h = default_h(k, p.h)?;
    let diam = diameter(k);
    let tol = p.factor * diam + 2.0 * h;
    b.cert("h", h);
    b.cert("diameter_K", diam);
    b.cert("tolerance", tol);

    let tail = ((p.big_m as f64 * p.tail_fraction).ceil() as usize).clamp(1, p.big_m);
    let opt = IterateOptions {
        storage: Some(StoragePlan {
            dense_tail: tail,
            ..StoragePlan::default_for(p.big_m)
        }),
        ..Default::default()
    };
    let traj = match b.absorb(iterate(k, &spec, p.big_m, Mode::Plain, &opt))? {
        Ok(t) => t,
        Err(()) => return Ok(b.finish(Verdict::Fail)),
    };
    let rows = tail_hausdorff(&traj, 0, h, true)?;
    let from = p.big_m + 1 - tail;
    let tail_max = rows
        .iter()
        .filter(|r| r.m >= from)
        .map(|r| r.hausdorff)
        .fold(0.0, f64::max);
    b.cert("tail_max_hausdorff", tail_max);
    let ok_cauchy = b.check(Check::at_most(
        "cauchy_tail",
        tail_max,
        tol,
        "max over the tail of d_H(K_m, K_M)",
    ));
    let ok_sym = symmetry_checks(&mut b, &traj.last().set, &recurring, tol, h)?;
    b.metrics = series_table(&rows);
    b.snapshots = pick_snapshots(&traj, 6);
    Ok(b.finish(if ok_cauchy && ok_sym { Verdict::Pass } else { Verdict::Fail }))
}
