use super::{Chain, CompactSet, Point, Region, Ring};
use crate::scalar::Scalar;

/// Longest run of vertices a single chord may replace.
const MAX_RUN: usize = 48;

#[inline]
fn within<T: Scalar>(p: Point<T>, a: Point<T>, b: Point<T>, tol: T) -> bool {
    let d = b - a;
    let len = d.norm();
    if len == T::zero() {
        return p.dist(a) <= tol;
    }
    let t = (p - a).dot(d);
    if t < -tol * len || t > len * len + tol * len {
        return false;
    }
    d.cross(p - a).abs() <= tol * len
}

/// Drops vertices lying within `tol` of the segment joining their two
/// neighbours. A single greedy pass; cyclic.
pub fn remove_collinear<T: Scalar>(pts: &[Point<T>], tol: T) -> Vec<Point<T>> {
    let mut out: Vec<Point<T>> = Vec::with_capacity(pts.len());
    for &p in pts {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 && within(out[out.len() - 1], out[out.len() - 2], p, tol) {
            out.pop();
        }
        out.push(p);
    }
    while out.len() >= 2 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    // close the cycle
    loop {
        let n = out.len();
        if n < 3 {
            break;
        }
        if within(out[n - 1], out[n - 2], out[0], tol) {
            out.pop();
        } else if within(out[0], out[n - 1], out[1], tol) {
            out.remove(0);
        } else {
            break;
        }
    }
    out
}

/// Anchor-based simplification of an open polyline: every removed vertex
/// lies within `tol` of the chord that replaces it.
fn simplify_open<T: Scalar>(pts: &[Point<T>], tol: T) -> Vec<Point<T>> {
    let n = pts.len();
    if n <= 2 {
        return pts.to_vec();
    }
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    out.push(pts[0]);
    while i < n - 1 {
        let mut j = i + 1;
        while j + 1 < n && j + 1 - i <= MAX_RUN {
            let cand = j + 1;
            if (i + 1..cand).all(|k| within(pts[k], pts[i], pts[cand], tol)) {
                j = cand;
            } else {
                break;
            }
        }
        out.push(pts[j]);
        i = j;
    }
    out
}

/// Simplifies a ring; the first vertex is kept as an anchor and the
/// closing vertex is revisited by a final collinearity pass.
pub fn simplify_ring<T: Scalar>(pts: &[Point<T>], tol: T) -> Vec<Point<T>> {
    if pts.len() <= 3 {
        return pts.to_vec();
    }
    let mut closed = pts.to_vec();
    closed.push(pts[0]);
    let mut s = simplify_open(&closed, tol);
    s.pop();
    remove_collinear(&s, tol)
}

/// Applies [`simplify_ring`] to every ring and chain; rings that collapse
/// are dropped.
pub fn simplify<T: Scalar>(set: &CompactSet<T>, tol: T) -> CompactSet<T> {
    let min_area = tol * tol;
    let fix = |r: &Ring<T>| -> Option<Ring<T>> {
        let v = simplify_ring(r.vertices(), tol);
        let ring = Ring::from_vertices_unchecked(v);
        (ring.len() >= 3 && ring.signed_area().abs() > min_area).then_some(ring)
    };
    let regions = set
        .regions()
        .iter()
        .filter_map(|r| {
            let outer = fix(r.outer())?;
            let holes = r.holes().iter().filter_map(fix).collect();
            Some(Region::from_rings_unchecked(outer, holes))
        })
        .collect();
    let chains = set
        .chains()
        .iter()
        .map(|c| {
            let pts = simplify_open(c.points(), tol);
            Chain::new(pts).expect("nonempty chain")
        })
        .collect();
    CompactSet::from_parts_unchecked(regions, chains)
}
