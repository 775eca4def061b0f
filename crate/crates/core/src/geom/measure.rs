use super::{CompactSet, Point, Ring};
use crate::scalar::Scalar;

/// Shoelace signed area, positive for counterclockwise vertex order.
pub fn signed_area<T: Scalar>(pts: &[Point<T>]) -> T {
    let n = pts.len();
    if n < 3 {
        return T::zero();
    }
    let mut acc = T::zero();
    let o = pts[0];
    for i in 1..n - 1 {
        acc = acc + (pts[i] - o).cross(pts[i + 1] - o);
    }
    acc * T::half()
}

/// Lebesgue measure of the region part; chains contribute nothing.
pub fn area<T: Scalar>(set: &CompactSet<T>) -> T {
    set.regions()
        .iter()
        .map(|r| r.area())
        .fold(T::zero(), |a, b| a + b)
}

/// Total edge length of all rings, holes included.
pub fn perimeter<T: Scalar>(set: &CompactSet<T>) -> T {
    set.regions()
        .iter()
        .flat_map(|r| r.rings())
        .map(ring_length)
        .fold(T::zero(), |a, b| a + b)
}

/// Length of the topological boundary counting each chain from both sides.
/// This is the quantity that controls raster error of parallel sets.
pub fn boundary_length<T: Scalar>(set: &CompactSet<T>) -> T {
    let chains = set
        .chains()
        .iter()
        .map(|c| c.length())
        .fold(T::zero(), |a, b| a + b);
    perimeter(set) + T::two() * chains
}

fn ring_length<T: Scalar>(ring: &Ring<T>) -> T {
    ring.edges()
        .map(|(a, b)| a.dist(b))
        .fold(T::zero(), |a, b| a + b)
}

/// Monotone-chain convex hull, counterclockwise, collinear points dropped.
pub fn convex_hull<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point<T>, a: Point<T>, b: Point<T>| (a - o).cross(b - o);
    let mut hull: Vec<Point<T>> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Largest distance between two vertices of the set (rings and chains).
pub fn diameter<T: Scalar>(set: &CompactSet<T>) -> T {
    let pts: Vec<Point<T>> = set.vertices().collect();
    let hull = convex_hull(&pts);
    match hull.len() {
        0 | 1 => T::zero(),
        2 => hull[0].dist(hull[1]),
        n => {
            // rotating calipers over antipodal pairs
            // Near-collinear runs make the cross products noisy, so the
            // first antipode comes from a full scan and the pointer only
            // moves forward on non-decreasing height. Parallel opposite
            // edges tie, hence both neighbours of the antipode are tried.
            let height = |i: usize, j: usize| {
                let a = hull[i];
                (hull[(i + 1) % n] - a).cross(hull[j % n] - a)
            };
            let mut j = (1..n)
                .max_by(|&p, &q| height(0, p).partial_cmp(&height(0, q)).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(1);
            let mut best = T::zero();
            let mut steps = 0;
            for i in 0..n {
                while steps < 2 * n && height(i, j + 1) >= height(i, j) {
                    j = (j + 1) % n;
                    steps += 1;
                }
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                for c in [hull[(j + n - 1) % n], hull[j], hull[(j + 1) % n]] {
                    best = best.max(a.dist(c)).max(b.dist(c));
                }
            }
            best
        }
    }
}

/// `∫_S |x − p|² dx` over the region part.
pub fn second_moment<T: Scalar>(set: &CompactSet<T>, p: Point<T>) -> T {
    let twelve = T::lit(12.0);
    let mut total = T::zero();
    for region in set.regions() {
        for (k, ring) in region.rings().enumerate() {
            let mut acc = T::zero();
            for (a, b) in ring.edges() {
                let (a, b) = (a - p, b - p);
                let c = a.cross(b);
                acc = acc + c * (a.x * a.x + a.x * b.x + b.x * b.x + a.y * a.y + a.y * b.y + b.y * b.y);
            }
            let m = (acc / twelve).abs();
            total = if k == 0 { total + m } else { total - m };
        }
    }
    total
}

/// Even-odd point-in-polygon test for a single ring.
pub(crate) fn point_in_ring<T: Scalar>(p: Point<T>, ring: &[Point<T>]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// True when `p` lies in the region part of `set` (boundary points may go
/// either way).
pub fn point_in_regions<T: Scalar>(p: Point<T>, set: &CompactSet<T>) -> bool {
    set.regions().iter().any(|r| {
        point_in_ring(p, r.outer().vertices())
            && !r.holes().iter().any(|h| point_in_ring(p, h.vertices()))
    })
}

pub fn point_segment_distance<T: Scalar>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).max(T::zero()).min(T::one());
    p.dist(a + d * t)
}

/// Euclidean distance from `p` to the set; zero inside regions.
pub fn distance_to_set<T: Scalar>(p: Point<T>, set: &CompactSet<T>) -> T {
    if point_in_regions(p, set) {
        return T::zero();
    }
    let mut best = T::infinity();
    for r in set.regions() {
        for ring in r.rings() {
            for (a, b) in ring.edges() {
                best = best.min(point_segment_distance(p, a, b));
            }
        }
    }
    for c in set.chains() {
        if c.is_point() {
            best = best.min(p.dist(c.points()[0]));
        }
        for (a, b) in c.segments() {
            best = best.min(point_segment_distance(p, a, b));
        }
    }
    best
}

fn orient<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>) -> i8 {
    let v = (b - a).cross(c - a);
    if v > T::zero() {
        1
    } else if v < T::zero() {
        -1
    } else {
        0
    }
}

fn on_segment<T: Scalar>(a: Point<T>, b: Point<T>, p: Point<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub(crate) fn segments_touch<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// First pair of ring edges that intersect other than at a shared endpoint
/// of neighbouring edges, or `None` for a simple ring.
pub(crate) fn first_self_intersection<T: Scalar>(v: &[Point<T>]) -> Option<(usize, usize)> {
    let n = v.len();
    let edge = |i: usize| (v[i], v[(i + 1) % n]);
    let lo = |i: usize| v[i].x.min(v[(i + 1) % n].x);
    let hi = |i: usize| v[i].x.max(v[(i + 1) % n].x);
    for i in 0..n {
        let (a, b) = edge(i);
        if a == b {
            return Some((i, i));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lo(i).partial_cmp(&lo(j)).unwrap());
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let x = lo(i);
        active.retain(|&j| hi(j) >= x);
        let (a, b) = edge(i);
        for &j in &active {
            let (c, d) = edge(j);
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                // neighbours share one vertex; they only fail if they fold back
                let (shared, p, q) = if (i + 1) % n == j { (b, a, d) } else { (a, b, c) };
                let (u, w) = (p - shared, q - shared);
                if u.cross(w) == T::zero() && u.dot(w) > T::zero() {
                    return Some((i.min(j), i.max(j)));
                }
                continue;
            }
            if segments_touch(a, b, c, d) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}
