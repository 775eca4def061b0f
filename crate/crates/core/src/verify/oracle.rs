use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geom::{distance_to_set, CompactSet, Point};

struct Cell {
    upper: f64,
    c: Point<f64>,
    half: f64,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.upper.total_cmp(&o.upper) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.total_cmp(&o.upper)
    }
}

/// `sup_{x ∈ A} d(x, B)` to within `eps` (the result never exceeds the
/// true value). Best-first branch and bound over square cells: `d(·, B)`
/// is 1-Lipschitz, so a cell of half-diagonal `ρ` around `c` is bounded by
/// `d(c, B) + ρ`, and any point of `A` within `d(c, A)` of `c` certifies
/// `d(c, B) − d(c, A)` from below.
pub fn directed_hausdorff(a: &CompactSet<f64>, b: &CompactSet<f64>, eps: f64) -> f64 {
    let Some((lo, hi)) = a.bbox() else { return 0.0 };
    let mut best: f64 = a.vertices().map(|v| distance_to_set(v, b)).fold(0.0, f64::max);
    let half = 0.5 * (hi.x - lo.x).max(hi.y - lo.y).max(eps);
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Cell>, best: &mut f64, c: Point<f64>, half: f64| {
        let rho = half * std::f64::consts::SQRT_2;
        let da = distance_to_set(c, a);
        if da > rho {
            return;
        }
        let db = distance_to_set(c, b);
        *best = best.max(db - da);
        heap.push(Cell {
            upper: db + rho,
            c,
            half,
        });
    };
    push(&mut heap, &mut best, Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)), half);
    while let Some(cell) = heap.pop() {
        if cell.upper <= best + eps {
            break;
        }
        let q = 0.5 * cell.half;
        for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
            push(&mut heap, &mut best, Point::new(cell.c.x + sx * q, cell.c.y + sy * q), q);
        }
    }
    best
}

/// Hausdorff distance between two compact sets to within `eps`.
pub fn exact_hausdorff(a: &CompactSet<f64>, b: &CompactSet<f64>, eps: f64) -> f64 {
    directed_hausdorff(a, b, eps).max(directed_hausdorff(b, a, eps))
}
