use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::inputs::{hull_segment_ball, segment_ball};
use super::{default_h, pick_snapshots, Check, ExperimentRun, RunBuilder, Table, Verdict};
use crate::clip::contains;
use crate::dynamics::{estimate_limit, iterate, IterateOptions, LimitEstimate, Mode, StoragePlan, Trajectory};
use crate::error::{Error, Result};
use crate::geom::{area, convex_hull, diameter, distance_to_set, signed_area, Ball, BallFit, CompactSet, Point};
use crate::sequences::{ledger, DirectionSpec, SquareSum};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertificateParams {
    pub spec: DirectionSpec,
    /// Disc radius; defaults to 0.1 for the ellipse certificate and 0.05
    /// for the convexity certificate.
    pub r: Option<f64>,
    pub segment_length: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    /// Number of initial increments skipped before iterating.
    pub drop_first: usize,
    /// Relative slack applied to every certified quantity.
    pub tol: f64,
    pub h: Option<f64>,
    pub tail_fraction: f64,
    pub ball_vertices: usize,
}

impl Default for CertificateParams {
    fn default() -> Self {
        CertificateParams {
            spec: DirectionSpec::PowerLaw { theta: 0.5, sigma: 0.75 },
            r: None,
            segment_length: 1.0,
            big_m: 2000,
            drop_first: 0,
            tol: 0.02,
            h: None,
            tail_fraction: 0.1,
            ball_vertices: 256,
        }
    }
}

/// Direction sequence with the first `d` increments removed, re-based so
/// that it starts from `e1`.
fn shifted(spec: &DirectionSpec, d: usize, big_m: usize) -> DirectionSpec {
    if d == 0 {
        return spec.clone();
    }
    let base = spec.angle(d);
    DirectionSpec::Explicit {
        directions: (1..=big_m).map(|m| spec.angle(m + d) - base).collect(),
    }
}

/// `(γ_M, γ)` of the shifted sequence.
fn shifted_gammas(spec: &DirectionSpec, d: usize, big_m: usize) -> Result<(f64, f64)> {
    let led = ledger(spec, big_m + d)?;
    if led.square_sum == SquareSum::Infinite {
        return Err(Error::Hypothesis(format!(
            "{}: increments are not square summable, the limit need not exist",
            spec.label()
        )));
    }
    let g_d = led.gamma_m(d);
    Ok((led.gamma_m(big_m + d) / g_d, led.gamma_target / g_d))
}

/// Inner disc shrunk by `1 − tol`, as a circumscribed polygon so that
/// containing it implies containing the round disc.
fn shrunk_ball(r: f64, tol: f64, n: usize) -> Result<CompactSet<f64>> {
    Ok(Ball::centered(r * (1.0 - tol))?.to_set(n, BallFit::Circumscribed))
}

fn contains_vertical_segment(k: &CompactSet<f64>, len: f64) -> f64 {
    (0..=32)
        .map(|i| Point::new(0.0, len * (i as f64 / 32.0 - 0.5)))
        .map(|p| distance_to_set(p, k))
        .fold(0.0, f64::max)
}

struct Limit {
    traj: Trajectory,
    est: LimitEstimate,
}

struct Setup {
    r: f64,
    gamma: f64,
    gamma_m: f64,
    area_k: f64,
}

/// Shared premise checks: `B_r ⊂ K` and the vertical segment in `K`.
/// Returns false when the certificate does not apply to `K`.
fn premises(b: &mut RunBuilder, k: &CompactSet<f64>, p: &CertificateParams, r: f64) -> Result<(bool, Setup)> {
    if !(r > 0.0) || !(p.tol >= 0.0 && p.tol < 1.0) || p.big_m == 0 {
        return Err(Error::InvalidArgument("need r > 0, tol in [0, 1) and M >= 1".into()));
    }
    let (gamma_m, gamma) = shifted_gammas(&p.spec, p.drop_first, p.big_m)?;
    let (gamma_m, gamma) = (gamma_m * p.segment_length, gamma * p.segment_length);
    let area_k = area(k);
    b.cert("gamma_target", gamma);
    b.cert("gamma_M", gamma_m);
    b.cert("area_K", area_k);
    b.cert("r", r);
    let ball_ok = b.check(Check::new(
        "ball_in_K",
        contains(k, &shrunk_ball(r, p.tol, p.ball_vertices.max(8))?),
        r * (1.0 - p.tol),
        r,
        "B_{r(1-tol)} is contained in K",
    ));
    let seg_ok = b.check(Check::at_most(
        "segment_in_K",
        contains_vertical_segment(k, p.segment_length),
        1e-9,
        "vertical segment of the given length lies in K",
    ));
    Ok((
        ball_ok && seg_ok,
        Setup {
            r,
            gamma,
            gamma_m,
            area_k,
        },
    ))
}

fn run_limit(b: &mut RunBuilder, k: &CompactSet<f64>, p: &CertificateParams) -> Result<Option<Limit>> {
    let h = default_h(k, p.h)?;
    let spec = shifted(&p.spec, p.drop_first, p.big_m);
    let tail = ((p.big_m as f64 * p.tail_fraction).ceil() as usize).clamp(1, p.big_m);
    let opt = IterateOptions {
        storage: Some(StoragePlan {
            keep_every: (p.big_m / 20).max(1),
            dense_tail: tail,
            extra: Vec::new(),
        }),
        ..Default::default()
    };
    let traj = match b.absorb(iterate(k, &spec, p.big_m, Mode::Rotated, &opt))? {
        Ok(t) => t,
        Err(()) => return Ok(None),
    };
    let est = estimate_limit(&traj, p.big_m + 1 - tail, h)?;
    b.cert("h", h);
    b.cert("limit_error", est.error);
    let drift = (area(&est.set) - area(k)).abs();
    let ok = b.check(Check::at_most(
        "area_conserved",
        drift,
        crate::dynamics::AREA_DRIFT_PER_STEP * p.big_m as f64 * area(k).max(1.0),
        "|area(L) - area(K)|",
    ));
    if !ok {
        return Ok(None);
    }
    Ok(Some(Limit { traj, est }))
}

fn record_series(b: &mut RunBuilder, lim: &Limit) {
    let mut t = Table::new(&["m", "area", "vertices", "rotation_total"]);
    for r in &lim.traj.records {
        t.push(vec![r.m as f64, r.area, r.vertex_count as f64, r.rotation_total]);
    }
    b.metrics = t;
    b.snapshots = pick_snapshots(&lim.traj, 5);
}

/// The rotated limit of `conv(ℓ ∪ B_r)` is not an ellipse: any ellipse
/// containing `B_r` and a chord of length `d` has area at least
/// `π d r / 2`, more than the conserved area.
pub fn ex_limit_not_ellipse(k: Option<&CompactSet<f64>>, p: &CertificateParams) -> Result<ExperimentRun> {
    let mut b = RunBuilder::new("ex2.2", p)?;
    let r = p.r.unwrap_or(0.1);
    let default_k;
    let k = match k {
        Some(k) => k,
        None => {
            default_k = hull_segment_ball(r, p.segment_length, p.ball_vertices)?;
            &default_k
        }
    };
    let (premise, s) = premises(&mut b, k, p, r)?;
    let bound = PI * s.gamma * s.r / 2.0;
    let gap = bound - s.area_k;
    b.cert("analytic_gap", gap);
    let applies = b.check(Check::at_most(
        "area_below_ellipse_bound",
        s.area_k,
        bound * (1.0 - p.tol),
        "area(K) < (pi gamma r / 2)(1 - tol)",
    ));
    if !(premise && applies) {
        return Ok(b.finish(Verdict::Inconclusive));
    }
    let lim = match run_limit(&mut b, k, p)? {
        Some(l) => l,
        None => return Ok(b.finish(Verdict::Fail)),
    };
    record_series(&mut b, &lim);
    let l = &lim.est.set;
    let e = lim.est.error;
    let ball_ok = b.check(Check::new(
        "ball_in_limit",
        contains(l, &shrunk_ball(s.r, p.tol, p.ball_vertices.max(8))?),
        s.r * (1.0 - p.tol),
        s.r,
        "B_{r(1-tol)} is contained in the estimated limit",
    ));
    let diam = diameter(l);
    let chord = diam - 2.0 * e;
    b.cert("diameter_limit", diam);
    let diam_ok = b.check(Check::at_least(
        "diameter_limit",
        chord,
        s.gamma_m * (1.0 - p.tol),
        "diam(L_hat) - 2 error against gamma_M (1 - tol)",
    ));
    let ellipse_lb = PI * chord * s.r * (1.0 - p.tol) / 2.0;
    let margin = ellipse_lb - s.area_k;
    b.cert("ellipse_area_lower_bound", ellipse_lb);
    b.cert("certificate_margin", margin);
    b.cert("margin_over_gap", margin / gap);
    if !(ball_ok && diam_ok) {
        return Ok(b.finish(Verdict::Inconclusive));
    }
    let ok = b.check(Check::at_least(
        "not_an_ellipse",
        margin,
        0.0,
        "pi (diam - 2 error) r (1 - tol) / 2 - area(K) > 0",
    ));
    Ok(b.finish(if ok { Verdict::Pass } else { Verdict::Fail }))
}

/// The rotated limit of `ℓ ∪ B_r` is not convex: its hull contains a
/// chord of length `γ` and a disc of radius `r`, so the hull area is at
/// least `γ r / 2` while the set keeps area `area(K)`.
pub fn ex_limit_nonconvex(k: Option<&CompactSet<f64>>, p: &CertificateParams) -> Result<ExperimentRun> {
    let mut b = RunBuilder::new("ex2.3", p)?;
    let r = p.r.unwrap_or(0.05);
    let default_k;
    let k = match k {
        Some(k) => k,
        None => {
            default_k = segment_ball(r, p.segment_length, p.ball_vertices)?;
            &default_k
        }
    };
    let (premise, s) = premises(&mut b, k, p, r)?;
    let bound = s.gamma * s.r / 2.0;
    let gap = bound - s.area_k;
    b.cert("analytic_gap", gap);
    let applies = b.check(Check::at_most(
        "area_below_hull_bound",
        s.area_k,
        bound * (1.0 - p.tol),
        "area(K) < (gamma r / 2)(1 - tol)",
    ));
    if !(premise && applies) {
        return Ok(b.finish(Verdict::Inconclusive));
    }
    let lim = match run_limit(&mut b, k, p)? {
        Some(l) => l,
        None => return Ok(b.finish(Verdict::Fail)),
    };
    record_series(&mut b, &lim);
    let l = &lim.est.set;
    let e = lim.est.error;
    let pts: Vec<Point<f64>> = l.vertices().collect();
    let hull = convex_hull(&pts);
    let hull_area = signed_area(&hull).abs();
    let hull_perimeter: f64 = (0..hull.len()).map(|i| hull[i].dist(hull[(i + 1) % hull.len()])).sum();
    let excess = hull_area - area(l);
    // hull(L̂) ⊂ hull(L)_e bounds the hull area of the true limit from below.
    let certified = hull_area - (hull_perimeter + 2.0 * PI * e) * e - PI * e * e - s.area_k;
    b.cert("hull_area", hull_area);
    b.cert("convexity_excess", excess);
    b.cert("certified_excess", certified);
    b.cert("certificate_margin", certified);
    b.cert("margin_over_gap", certified / gap);
    let need = gap * (1.0 - p.tol);
    if b.check(Check::at_least(
        "nonconvex",
        certified,
        need,
        "certified hull excess against (gamma r / 2 - area K)(1 - tol)",
    )) {
        Ok(b.finish(Verdict::Pass))
    } else if excess >= need {
        Ok(b.finish(Verdict::Inconclusive))
    } else {
        Ok(b.finish(Verdict::Fail))
    }
}
