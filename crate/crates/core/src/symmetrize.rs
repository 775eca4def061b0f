//! Steiner symmetrization by an exact chord-length sweep.
//!
//! In the frame `(t, s) = (p·w, p·u)` with `w = u` turned by −π/2, each
//! line `t = const` is parallel to `u`. The total length `m(t)` of the
//! cross-section is piecewise linear between breakpoints (projected
//! vertices and edge crossings), with possible jumps at breakpoints. The
//! symmetral is `{|s| ≤ m(t)/2}` plus whatever measure-zero pieces are
//! needed where the cross-section is a point or a null set.

use crate::clip::{interval_difference, symdiff_area};
use crate::geom::{
    distance_to_set, reflect, remove_collinear, signed_area, Chain, CompactSet, Direction, Point,
    Region, Ring,
};
use crate::scalar::Scalar;
use crate::sweep::{collect_edges, sweep, Snap, Sweep, SweepOptions};

/// Piecewise linear cross-section measure `m(t)` along `u⊥`.
///
/// Between `breakpoints[k]` and `breakpoints[k + 1]` the function runs
/// linearly from `right[k]` to `left[k + 1]`. `at[k]` is the measure of the
/// closed cross-section exactly at `breakpoints[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChordFunction<T> {
    pub breakpoints: Vec<T>,
    pub left: Vec<T>,
    pub right: Vec<T>,
    pub at: Vec<T>,
    /// Closed `t`-intervals met by chains that are not parallel to `u`.
    /// Inside them the set meets every line even where `m = 0`.
    pub support_marks: Vec<(T, T)>,
}

impl<T: Scalar> ChordFunction<T> {
    /// `m(t)`; zero outside the breakpoint range.
    pub fn value(&self, t: T) -> T {
        let b = &self.breakpoints;
        if b.is_empty() || t < b[0] || t > b[b.len() - 1] {
            return T::zero();
        }
        let k = b.partition_point(|&x| x < t);
        if b[k] == t {
            return self.at[k];
        }
        let (t0, t1) = (b[k - 1], b[k]);
        let f = (t - t0) / (t1 - t0);
        self.right[k - 1] + (self.left[k] - self.right[k - 1]) * f
    }

    /// `∫ m(t) dt`, equal to the area of the set.
    pub fn integral(&self) -> T {
        self.breakpoints
            .windows(2)
            .enumerate()
            .map(|(k, w)| (w[1] - w[0]) * (self.right[k] + self.left[k + 1]) * T::half())
            .fold(T::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Copy)]
struct Frame<T> {
    u: Point<T>,
    w: Point<T>,
}

impl<T: Scalar> Frame<T> {
    fn new(dir: Direction<T>) -> Self {
        let u = dir.unit();
        Frame { u, w: Point::new(u.y, -u.x) }
    }
    #[inline]
    fn to(&self, p: Point<T>) -> Point<T> {
        Point::new(p.dot(self.w), p.dot(self.u))
    }
    #[inline]
    fn back(&self, q: Point<T>) -> Point<T> {
        self.w * q.x + self.u * q.y
    }
}

fn union_measure<T: Scalar>(iv: &mut [(T, T)]) -> T {
    iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut total = T::zero();
    let mut cur: Option<(T, T)> = None;
    for &(a, b) in iv.iter() {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total = total + (cb - ca);
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((a, b)) = cur {
        total = total + (b - a);
    }
    total
}

fn chords<T: Scalar>(set: &CompactSet<T>, frame: Frame<T>) -> ChordFunction<T> {
    let eps = T::geom_eps();
    let rings: Vec<Vec<Point<T>>> = set
        .regions()
        .iter()
        .flat_map(|r| r.rings().map(|g| g.vertices().iter().map(|&p| frame.to(p)).collect()))
        .collect();
    let chains: Vec<Vec<Point<T>>> = set
        .chains()
        .iter()
        .map(|c| c.points().iter().map(|&p| frame.to(p)).collect())
        .collect();
    let xs: Vec<T> = rings
        .iter()
        .chain(chains.iter())
        .flat_map(|r| r.iter().map(|p| p.x))
        .collect();
    let snap = Snap::build(xs, eps);
    let mut edges = Vec::new();
    collect_edges(&mut edges, rings.iter(), 0, &snap);
    let sw: Sweep<T> = sweep(
        &edges,
        1,
        &snap.reps(),
        SweepOptions {
            sliver: T::zero(),
            gap: T::zero(),
            eps,
        },
    );
    let n = sw.lines.len();
    let mut left = vec![T::zero(); n];
    let mut right = vec![T::zero(); n];
    let mut extra: Vec<Vec<(T, T)>> = vec![Vec::new(); n];
    let mut marks = Vec::new();
    let line_of = |t: T| sw.lines.partition_point(|&l| l < t);
    for c in &chains {
        if c.len() == 1 {
            let t = snap.snap(c[0].x);
            marks.push((t, t));
            continue;
        }
        for w in c.windows(2) {
            let (ta, tb) = (snap.snap(w[0].x), snap.snap(w[1].x));
            if ta == tb {
                let k = line_of(ta);
                extra[k].push((w[0].y.min(w[1].y), w[0].y.max(w[1].y)));
                marks.push((ta, ta));
            } else {
                marks.push((ta.min(tb), ta.max(tb)));
            }
        }
    }
    let mut at = vec![T::zero(); n];
    let mut iv: Vec<(T, T)> = Vec::new();
    for k in 0..n {
        iv.clear();
        if k > 0 {
            for sp in sw.spans(k - 1, 0) {
                let wdt = sp.width_b().max(T::zero());
                left[k] = left[k] + wdt;
                iv.push((sp.lo.b, sp.lo.b + wdt));
            }
        }
        if k + 1 < n {
            for sp in sw.spans(k, 0) {
                let wdt = sp.width_a().max(T::zero());
                right[k] = right[k] + wdt;
                iv.push((sp.lo.a, sp.lo.a + wdt));
            }
        }
        iv.extend_from_slice(&extra[k]);
        at[k] = union_measure(&mut iv).max(left[k]).max(right[k]);
    }
    ChordFunction {
        breakpoints: sw.lines,
        left,
        right,
        at,
        support_marks: marks,
    }
}

/// Chord-length function of `set` along direction `u`.
pub fn chord_function<T: Scalar>(set: &CompactSet<T>, u: Direction<T>) -> ChordFunction<T> {
    chords(set, Frame::new(u))
}

/// The Steiner symmetral `S_u(set)`: every cross-section parallel to `u`
/// is replaced by the centered closed segment of the same length.
pub fn steiner_symmetral<T: Scalar>(set: &CompactSet<T>, u: Direction<T>) -> CompactSet<T> {
    let frame = Frame::new(u);
    let cf = chords(set, frame);
    let z = T::collinear_eps();
    let t = &cf.breakpoints;
    let n = t.len();
    let clamp = |v: T| if v <= z { T::zero() } else { v };
    let left: Vec<T> = cf.left.iter().map(|&v| clamp(v)).collect();
    let right: Vec<T> = cf.right.iter().map(|&v| clamp(v)).collect();
    let h = T::half();

    // maximal runs of slabs with positive chord length, split at pinches
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut cur: Option<usize> = None;
    for k in 0..n.saturating_sub(1) {
        let positive = right[k] > T::zero() || left[k + 1] > T::zero();
        if !positive {
            if let Some(s) = cur.take() {
                runs.push((s, k - 1));
            }
            continue;
        }
        if let Some(s) = cur {
            if k > s && (left[k] == T::zero() || right[k] == T::zero()) {
                runs.push((s, k - 1));
                cur = Some(k);
            }
        } else {
            cur = Some(k);
        }
    }
    if let Some(s) = cur {
        runs.push((s, n - 2));
    }

    let mut regions = Vec::with_capacity(runs.len());
    let mut covered: Vec<(T, T)> = Vec::with_capacity(runs.len());
    for &(j0, j1) in &runs {
        let e = j1 + 1;
        let mut pts: Vec<Point<T>> = Vec::with_capacity(4 * (e - j0 + 1));
        let r0 = right[j0];
        pts.push(Point::new(t[j0], -r0 * h));
        for k in j0 + 1..e {
            pts.push(Point::new(t[k], -left[k] * h));
            if right[k] != left[k] {
                pts.push(Point::new(t[k], -right[k] * h));
            }
        }
        pts.push(Point::new(t[e], -left[e] * h));
        if left[e] > T::zero() {
            pts.push(Point::new(t[e], left[e] * h));
        }
        for k in (j0 + 1..e).rev() {
            pts.push(Point::new(t[k], right[k] * h));
            if right[k] != left[k] {
                pts.push(Point::new(t[k], left[k] * h));
            }
        }
        if r0 > T::zero() {
            pts.push(Point::new(t[j0], r0 * h));
        }
        let pts = remove_collinear(&pts, T::collinear_eps());
        covered.push((t[j0], t[e]));
        if pts.len() < 3 || signed_area(&pts) <= T::zero() {
            continue;
        }
        let ring: Vec<Point<T>> = pts.into_iter().map(|q| frame.back(q)).collect();
        regions.push(Region::from_rings_unchecked(Ring::from_vertices_unchecked(ring), Vec::new()));
    }

    let mut chains: Vec<Chain<T>> = Vec::new();
    for k in 0..n {
        let mx = left[k].max(right[k]);
        let a = cf.at[k];
        if a <= mx + z {
            continue;
        }
        let (tk, top) = (t[k], a * h);
        if mx == T::zero() {
            chains.push(Chain::segment(frame.back(Point::new(tk, -top)), frame.back(Point::new(tk, top))));
            covered.push((tk, tk));
        } else {
            let inner = mx * h;
            chains.push(Chain::segment(frame.back(Point::new(tk, inner)), frame.back(Point::new(tk, top))));
            chains.push(Chain::segment(frame.back(Point::new(tk, -top)), frame.back(Point::new(tk, -inner))));
        }
    }

    if !cf.support_marks.is_empty() {
        covered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let covered = merge_closed(&covered);
        let support = merge_closed(&{
            let mut m = cf.support_marks.clone();
            m.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            m
        });
        for (a, b) in support {
            let pieces = if a == b {
                if covered.iter().any(|&(c, d)| c <= a && a <= d) {
                    Vec::new()
                } else {
                    vec![(a, a)]
                }
            } else {
                interval_difference(&[(a, b)], &covered)
            };
            for (p, q) in pieces {
                if q - p > z {
                    chains.push(Chain::segment(
                        frame.back(Point::new(p, T::zero())),
                        frame.back(Point::new(q, T::zero())),
                    ));
                } else if !covered.iter().any(|&(c, d)| c <= p && p <= d) {
                    chains.push(Chain::point(frame.back(Point::new(p, T::zero()))));
                }
            }
        }
    }
    CompactSet::from_parts_unchecked(regions, chains)
}

/// Union of sorted closed intervals.
fn merge_closed<T: Scalar>(iv: &[(T, T)]) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::with_capacity(iv.len());
    for &(a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Reflection symmetry across `u⊥`: region symmetric difference at most
/// `tol` and every chain within `tol` of the mirrored set.
pub fn is_symmetric<T: Scalar>(set: &CompactSet<T>, u: Direction<T>, tol: T) -> bool {
    let mirrored = reflect(set, u);
    if symdiff_area(set, &mirrored) > tol {
        return false;
    }
    let samples = 8;
    set.chains().iter().all(|c| {
        if c.is_point() {
            return distance_to_set(c.points()[0], &mirrored) <= tol;
        }
        c.segments().all(|(a, b)| {
            (0..=samples).all(|i| {
                let f = T::lit(i as f64 / samples as f64);
                distance_to_set(a + (b - a) * f, &mirrored) <= tol
            })
        })
    })
}
