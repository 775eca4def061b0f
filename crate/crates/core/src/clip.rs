//! Regularized polygon booleans on compact sets.
//!
//! Both operands are decomposed into trapezoids over a common set of
//! vertical slabs; the boolean is taken span by span and the boundary of
//! the result is re-linked into rings. Chains are null sets and are dropped.

use std::collections::HashMap;

use crate::geom::{
    distance_to_set, point_in_regions, remove_collinear, signed_area, CompactSet, Point, Region, Ring,
};
use crate::scalar::Scalar;
use crate::sweep::{collect_edges, sweep, Snap, Span, Sweep, SweepOptions, Track};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Intersection,
    Union,
    Difference,
    SymmetricDifference,
}

impl BoolOp {
    #[inline]
    fn keep(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::Intersection => a && b,
            BoolOp::Union => a || b,
            BoolOp::Difference => a && !b,
            BoolOp::SymmetricDifference => a != b,
        }
    }
}

fn decompose<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> Sweep<T> {
    let eps = T::geom_eps();
    let xs: Vec<T> = [a, b]
        .iter()
        .flat_map(|s| s.regions().iter().flat_map(|r| r.rings().flat_map(|g| g.vertices().iter().map(|p| p.x))))
        .collect();
    let snap = Snap::build(xs, eps);
    let mut edges = Vec::new();
    for (k, s) in [a, b].iter().enumerate() {
        collect_edges(
            &mut edges,
            s.regions().iter().flat_map(|r| r.rings().map(|g| g.vertices())),
            k,
            &snap,
        );
    }
    sweep(&edges, 2, &snap.reps(), SweepOptions { sliver: eps, gap: eps, eps })
}

/// Boolean of two span lists of one slab. Inputs are sorted and disjoint.
fn combine<T: Scalar>(a: &[Span<T>], b: &[Span<T>], op: BoolOp, eps: T, out: &mut Vec<Span<T>>) {
    out.clear();
    let mut ev: Vec<(T, u8, usize, Track<T>)> = Vec::with_capacity(2 * (a.len() + b.len()));
    for (s, list) in [a, b].iter().enumerate() {
        for sp in list.iter() {
            ev.push((sp.lo.m, 0, s, sp.lo));
            ev.push((sp.hi.m, 1, s, sp.hi));
        }
    }
    ev.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut inside = [false, false];
    let mut open: Option<Track<T>> = None;
    for (_, kind, s, tr) in ev {
        let before = op.keep(inside[0], inside[1]);
        inside[s] = kind == 0;
        let after = op.keep(inside[0], inside[1]);
        if !before && after {
            open = Some(tr);
        } else if before && !after {
            let lo = open.take().expect("open span");
            match out.last_mut() {
                Some(last) if lo.m - last.hi.m <= eps => last.hi = tr,
                _ => out.push(Span { lo, hi: tr }),
            }
        }
    }
    out.retain(|sp| sp.hi.m - sp.lo.m > eps);
}

/// Area of `a op b` without building the result.
pub fn boolean_area<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>, op: BoolOp) -> T {
    let sw = decompose(a, b);
    let eps = T::geom_eps();
    let mut buf = Vec::new();
    let mut total = T::zero();
    for (k, sl) in sw.slabs.iter().enumerate() {
        combine(sw.spans(k, 0), sw.spans(k, 1), op, eps, &mut buf);
        let w: T = buf.iter().map(|sp| sp.hi.m - sp.lo.m).fold(T::zero(), |x, y| x + y);
        total = total + (sl.xb - sl.xa) * w;
    }
    total
}

pub fn intersect<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> CompactSet<T> {
    boolean(a, b, BoolOp::Intersection)
}

pub fn union<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> CompactSet<T> {
    boolean(a, b, BoolOp::Union)
}

pub fn difference<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> CompactSet<T> {
    boolean(a, b, BoolOp::Difference)
}

/// `area(a ∖ b) + area(b ∖ a)`.
pub fn symdiff_area<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> T {
    boolean_area(a, b, BoolOp::SymmetricDifference)
}

/// `b ⊂ a` up to the geometric tolerance: the part of `b` outside `a` has
/// negligible area and every chain of `b` stays within tolerance of `a`.
pub fn contains<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>) -> bool {
    let eps = T::geom_eps();
    let ab = crate::geom::area(b);
    if boolean_area(b, a, BoolOp::Difference) > eps * ab.max(T::one()) {
        return false;
    }
    b.chains().iter().all(|c| {
        if c.is_point() {
            return distance_to_set(c.points()[0], a) <= eps;
        }
        c.segments().all(|(p, q)| segment_near(p, q, a, eps))
    })
}

/// Whether the whole segment `pq` lies within `eps` of `set`. The segment is
/// cut at every crossing with a region edge; each piece is then either
/// inside a region or must hug the boundary or a chain.
fn segment_near<T: Scalar>(p: Point<T>, q: Point<T>, set: &CompactSet<T>, eps: T) -> bool {
    let d = q - p;
    let mut ts = vec![T::zero(), T::one()];
    for r in set.regions() {
        for ring in r.rings() {
            for (a, b) in ring.edges() {
                let e = b - a;
                let den = d.cross(e);
                if den == T::zero() {
                    continue;
                }
                let t = (a - p).cross(e) / den;
                let s = (a - p).cross(d) / den;
                if t > T::zero() && t < T::one() && s >= T::zero() && s <= T::one() {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let at = |t: T| p + d * t;
    if ts.iter().any(|&t| distance_to_set(at(t), set) > eps) {
        return false;
    }
    ts.windows(2).all(|w| {
        let mid = at((w[0] + w[1]) * T::half());
        point_in_regions(mid, set) || distance_to_set(mid, set) <= eps
    })
}

pub fn boolean<T: Scalar>(a: &CompactSet<T>, b: &CompactSet<T>, op: BoolOp) -> CompactSet<T> {
    let sw = decompose(a, b);
    let eps = T::geom_eps();
    let mut per_slab: Vec<Vec<Span<T>>> = Vec::with_capacity(sw.slabs.len());
    let mut buf = Vec::new();
    for k in 0..sw.slabs.len() {
        combine(sw.spans(k, 0), sw.spans(k, 1), op, eps, &mut buf);
        per_slab.push(buf.clone());
    }
    CompactSet::from_regions(assemble(&sw.lines, &per_slab, eps))
}

/// Builds rings from per-slab spans over `lines` (slab `k` lies between
/// `lines[k]` and `lines[k + 1]`).
pub(crate) fn assemble<T: Scalar>(lines: &[T], slabs: &[Vec<Span<T>>], eps: T) -> Vec<Region<T>> {
    let nl = lines.len();
    if nl < 2 {
        return Vec::new();
    }
    // y snapping per line
    let snaps: Vec<Snap<T>> = (0..nl)
        .map(|i| {
            let mut ys = Vec::new();
            if i > 0 {
                for sp in &slabs[i - 1] {
                    ys.push(sp.lo.b);
                    ys.push(sp.hi.b);
                }
            }
            if i < nl - 1 {
                for sp in &slabs[i] {
                    ys.push(sp.lo.a);
                    ys.push(sp.hi.a);
                }
            }
            Snap::build(ys, eps)
        })
        .collect();

    let mut segs: Vec<(Point<T>, Point<T>)> = Vec::new();
    for (k, spans) in slabs.iter().enumerate() {
        let (xa, xb) = (lines[k], lines[k + 1]);
        for sp in spans {
            let (la, lb) = (snaps[k].snap(sp.lo.a), snaps[k + 1].snap(sp.lo.b));
            let (ha, hb) = (snaps[k].snap(sp.hi.a), snaps[k + 1].snap(sp.hi.b));
            segs.push((Point::new(xa, la), Point::new(xb, lb)));
            segs.push((Point::new(xb, hb), Point::new(xa, ha)));
        }
    }
    let mut left: Vec<(T, T)> = Vec::new();
    let mut right: Vec<(T, T)> = Vec::new();
    for i in 0..nl {
        left.clear();
        right.clear();
        if i > 0 {
            for sp in &slabs[i - 1] {
                left.push((snaps[i].snap(sp.lo.b), snaps[i].snap(sp.hi.b)));
            }
        }
        if i < nl - 1 {
            for sp in &slabs[i] {
                right.push((snaps[i].snap(sp.lo.a), snaps[i].snap(sp.hi.a)));
            }
        }
        let l = normalize(&left);
        let r = normalize(&right);
        let x = lines[i];
        for (y0, y1) in interval_difference(&l, &r) {
            segs.push((Point::new(x, y0), Point::new(x, y1)));
        }
        for (y0, y1) in interval_difference(&r, &l) {
            segs.push((Point::new(x, y1), Point::new(x, y0)));
        }
    }
    segs.retain(|(p, q)| p != q);
    link(&segs, eps)
}

fn normalize<T: Scalar>(iv: &[(T, T)]) -> Vec<(T, T)> {
    let mut v: Vec<(T, T)> = iv.iter().copied().filter(|(a, b)| b > a).collect();
    v.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out: Vec<(T, T)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// `a ∖ b` for sorted disjoint interval lists; pieces keep their closure.
pub(crate) fn interval_difference<T: Scalar>(a: &[(T, T)], b: &[(T, T)]) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut j = 0;
    for &(s, e) in a {
        let mut cur = s;
        while j < b.len() && b[j].1 <= cur {
            j += 1;
        }
        let mut k = j;
        while k < b.len() && b[k].0 < e {
            if b[k].0 > cur {
                out.push((cur, b[k].0));
            }
            cur = cur.max(b[k].1);
            k += 1;
        }
        if cur < e {
            out.push((cur, e));
        }
    }
    out
}

/// Links directed boundary segments into rings and groups holes with
/// their outer rings.
fn link<T: Scalar>(segs: &[(Point<T>, Point<T>)], eps: T) -> Vec<Region<T>> {
    let mut from: HashMap<(u64, u64), Vec<usize>> = HashMap::with_capacity(segs.len());
    for (i, (p, _)) in segs.iter().enumerate() {
        from.entry(p.key()).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut rings: Vec<Vec<Point<T>>> = Vec::new();
    for s0 in 0..segs.len() {
        if used[s0] {
            continue;
        }
        let start = segs[s0].0;
        let mut pts = vec![start];
        let mut cur = s0;
        let mut closed = false;
        loop {
            used[cur] = true;
            let (p, q) = segs[cur];
            if q == start {
                closed = true;
                break;
            }
            pts.push(q);
            let din = q - p;
            let mut best: Option<(T, usize)> = None;
            if let Some(cands) = from.get(&q.key()) {
                for &c in cands {
                    if used[c] {
                        continue;
                    }
                    let d = segs[c].1 - segs[c].0;
                    let mut ang = din.cross(d).atan2(din.dot(d));
                    if ang >= T::PI() {
                        ang = -T::PI();
                    }
                    if best.map_or(true, |(b, _)| ang > b) {
                        best = Some((ang, c));
                    }
                }
            }
            match best {
                Some((_, c)) => cur = c,
                None => break,
            }
        }
        if !closed {
            continue;
        }
        let pts = remove_collinear(&pts, T::collinear_eps());
        if pts.len() >= 3 && signed_area(&pts).abs() > eps * eps {
            rings.push(pts);
        }
    }
    group_rings(rings)
}

/// Counterclockwise rings become outers; each clockwise ring is attached
/// to the smallest outer containing it.
pub(crate) fn group_rings<T: Scalar>(rings: Vec<Vec<Point<T>>>) -> Vec<Region<T>> {
    let mut outers: Vec<(T, Vec<Point<T>>, Vec<Ring<T>>)> = Vec::new();
    let mut holes: Vec<Vec<Point<T>>> = Vec::new();
    for r in rings {
        let a = signed_area(&r);
        if a > T::zero() {
            outers.push((a, r, Vec::new()));
        } else {
            holes.push(r);
        }
    }
    for h in holes {
        let n = h.len();
        let (mut bi, mut bl) = (0, T::zero());
        for i in 0..n {
            let l = h[i].dist(h[(i + 1) % n]);
            if l > bl {
                bi = i;
                bl = l;
            }
        }
        let probe = (h[bi] + h[(bi + 1) % n]) * T::half();
        let mut best: Option<usize> = None;
        for (k, (a, o, _)) in outers.iter().enumerate() {
            if crate::geom::point_in_ring(probe, o) && best.map_or(true, |b| *a < outers[b].0) {
                best = Some(k);
            }
        }
        if let Some(k) = best {
            outers[k].2.push(Ring::from_vertices_unchecked(h));
        }
    }
    outers
        .into_iter()
        .map(|(_, o, hs)| Region::from_rings_unchecked(Ring::from_vertices_unchecked(o), hs))
        .collect()
}
