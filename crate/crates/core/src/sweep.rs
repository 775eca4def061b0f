//! Vertical-slab decomposition of polygon sets.
//!
//! All vertex x-coordinates (after snapping) and all pairwise edge crossings
//! cut the plane into slabs in which no two edges cross. Inside a slab each
//! set is a disjoint union of trapezoids, each bounded by a lower and an
//! upper edge; the nonzero winding rule decides which gaps are filled.

use crate::geom::Point;
use crate::scalar::Scalar;

/// Clusters nearly equal coordinates onto a shared representative.
pub(crate) struct Snap<T> {
    raw: Vec<T>,
    rep: Vec<T>,
}

impl<T: Scalar> Snap<T> {
    pub fn build(mut vals: Vec<T>, eps: T) -> Self {
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals.dedup();
        let mut rep = Vec::with_capacity(vals.len());
        let mut first = T::neg_infinity();
        for &v in &vals {
            if v - first > eps {
                first = v;
            }
            rep.push(first);
        }
        Snap { raw: vals, rep }
    }

    pub fn snap(&self, x: T) -> T {
        let i = self.raw.partition_point(|&r| r < x);
        if i < self.raw.len() && self.raw[i] == x {
            return self.rep[i];
        }
        x
    }

    /// Sorted distinct representatives.
    pub fn reps(&self) -> Vec<T> {
        let mut r = self.rep.clone();
        r.dedup();
        r
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Edge<T> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
    /// +1 when the ring traverses the edge towards +x.
    pub wind: i32,
    pub set: usize,
}

impl<T: Scalar> Edge<T> {
    #[inline]
    pub fn y_at(&self, x: T) -> T {
        if x <= self.x0 {
            self.y0
        } else if x >= self.x1 {
            self.y1
        } else {
            self.y0 + (self.y1 - self.y0) * ((x - self.x0) / (self.x1 - self.x0))
        }
    }
}

/// y-values of a boundary edge at the left end, middle and right end of a
/// slab.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Track<T> {
    pub a: T,
    pub m: T,
    pub b: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Span<T> {
    pub lo: Track<T>,
    pub hi: Track<T>,
}

impl<T: Scalar> Span<T> {
    #[inline]
    pub fn width_a(&self) -> T {
        self.hi.a - self.lo.a
    }
    #[inline]
    pub fn width_b(&self) -> T {
        self.hi.b - self.lo.b
    }
}

pub(crate) struct Slab<T> {
    pub xa: T,
    pub xb: T,
    /// `spans[bounds[s]..bounds[s + 1]]` belong to set `s`.
    bounds: [u32; 3],
    start: u32,
}

pub(crate) struct Sweep<T> {
    pub lines: Vec<T>,
    pub slabs: Vec<Slab<T>>,
    spans: Vec<Span<T>>,
}

impl<T: Scalar> Sweep<T> {
    /// Spans of set `s` in slab `k`, bottom to top.
    #[inline]
    pub fn spans(&self, k: usize, s: usize) -> &[Span<T>] {
        let sl = &self.slabs[k];
        let base = sl.start as usize;
        &self.spans[base + sl.bounds[s] as usize..base + sl.bounds[s + 1] as usize]
    }
}

#[derive(Clone, Copy)]
pub(crate) struct SweepOptions<T> {
    /// Spans narrower than this at the slab middle are dropped.
    pub sliver: T,
    /// Gaps narrower than this at the slab middle are closed.
    pub gap: T,
    /// Crossings closer than this to a slab end or to each other are merged.
    pub eps: T,
}

/// Collects the non-vertical edges of `rings`, with x snapped.
pub(crate) fn collect_edges<T: Scalar>(
    edges: &mut Vec<Edge<T>>,
    rings: impl IntoIterator<Item = impl AsRef<[Point<T>]>>,
    set: usize,
    snap: &Snap<T>,
) {
    for ring in rings {
        let v = ring.as_ref();
        let n = v.len();
        for i in 0..n {
            let (p, q) = (v[i], v[(i + 1) % n]);
            let (px, qx) = (snap.snap(p.x), snap.snap(q.x));
            if px < qx {
                edges.push(Edge { x0: px, y0: p.y, x1: qx, y1: q.y, wind: 1, set });
            } else if qx < px {
                edges.push(Edge { x0: qx, y0: q.y, x1: px, y1: p.y, wind: -1, set });
            }
        }
    }
}

/// Runs the slab decomposition. `nsets` is 1 or 2; `lines` must contain
/// every snapped edge endpoint.
pub(crate) fn sweep<T: Scalar>(
    edges: &[Edge<T>],
    nsets: usize,
    lines: &[T],
    opt: SweepOptions<T>,
) -> Sweep<T> {
    assert!(nsets >= 1 && nsets <= 2);
    let idx = |x: T| lines.partition_point(|&l| l < x);
    let mut order: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .map(|(e, ed)| (idx(ed.x0), idx(ed.x1), e))
        .collect();
    order.sort_unstable();

    let mut out = Sweep {
        lines: Vec::with_capacity(lines.len()),
        slabs: Vec::with_capacity(lines.len()),
        spans: Vec::new(),
    };
    if lines.is_empty() {
        return out;
    }
    out.lines.push(lines[0]);

    let mut active: Vec<(usize, usize)> = Vec::new(); // (end line index, edge)
    let mut next = 0;
    let mut cuts: Vec<T> = Vec::new();
    let mut ya: Vec<T> = Vec::new();
    let mut yb: Vec<T> = Vec::new();
    let mut ord: Vec<(T, T, usize)> = Vec::new();
    let mut tmp: Vec<Span<T>> = Vec::new();

    for j in 0..lines.len() - 1 {
        active.retain(|&(end, _)| end > j);
        while next < order.len() && order[next].0 == j {
            active.push((order[next].1, order[next].2));
            next += 1;
        }
        let (xa, xb) = (lines[j], lines[j + 1]);
        cuts.clear();
        cuts.push(xa);
        if active.len() >= 2 {
            ya.clear();
            yb.clear();
            for &(_, e) in &active {
                ya.push(edges[e].y_at(xa));
                yb.push(edges[e].y_at(xb));
            }
            let mut inner: Vec<T> = Vec::new();
            for p in 0..active.len() {
                for q in (p + 1)..active.len() {
                    let da = ya[p] - ya[q];
                    let db = yb[p] - yb[q];
                    if (da > opt.eps && db < -opt.eps) || (da < -opt.eps && db > opt.eps) {
                        let x = xa + (xb - xa) * (da / (da - db));
                        if x > xa + opt.eps && x < xb - opt.eps {
                            inner.push(x);
                        }
                    }
                }
            }
            inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for x in inner {
                if x - *cuts.last().unwrap() > opt.eps {
                    cuts.push(x);
                }
            }
        }
        cuts.push(xb);

        for w in cuts.windows(2) {
            let (sa, sb) = (w[0], w[1]);
            let sm = (sa + sb) * T::half();
            let start = out.spans.len() as u32;
            let mut bounds = [0u32; 3];
            for s in 0..nsets {
                ord.clear();
                for &(_, e) in &active {
                    let ed = &edges[e];
                    if ed.set == s {
                        ord.push((ed.y_at(sm), ed.y_at(sb) - ed.y_at(sa), e));
                    }
                }
                ord.sort_by(|x, y| {
                    x.0.partial_cmp(&y.0)
                        .unwrap()
                        .then(x.1.partial_cmp(&y.1).unwrap())
                        .then(x.2.cmp(&y.2))
                });
                tmp.clear();
                let mut wsum = 0i32;
                let mut open: Option<Track<T>> = None;
                for &(_, _, e) in &ord {
                    let ed = &edges[e];
                    let prev = wsum;
                    wsum += ed.wind;
                    let tr = Track {
                        a: ed.y_at(sa),
                        m: ed.y_at(sm),
                        b: ed.y_at(sb),
                    };
                    if prev == 0 && wsum != 0 {
                        open = Some(tr);
                    } else if prev != 0 && wsum == 0 {
                        let lo = open.take().expect("span opened before closing");
                        tmp.push(Span { lo, hi: tr });
                    }
                }
                let mut merged: Vec<Span<T>> = Vec::with_capacity(tmp.len());
                for sp in tmp.drain(..) {
                    if let Some(last) = merged.last_mut() {
                        if sp.lo.m - last.hi.m <= opt.gap {
                            last.hi = sp.hi;
                            continue;
                        }
                    }
                    merged.push(sp);
                }
                merged.retain(|sp| sp.hi.m - sp.lo.m > opt.sliver);
                bounds[s + 1] = bounds[s] + merged.len() as u32;
                out.spans.extend_from_slice(&merged);
            }
            for s in nsets..2 {
                bounds[s + 1] = bounds[s];
            }
            out.slabs.push(Slab { xa: sa, xb: sb, bounds, start });
            out.lines.push(sb);
        }
    }
    out
}
