use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::clip::{difference, union};
use crate::geom::{convex_hull, Chain, CompactSet, Direction, Point};

/// Star-shaped polygon around `c` with `n` vertices at evenly spaced
/// angles and radii drawn from `[r0, r1]`.
pub fn star(rng: &mut ChaCha8Rng, c: Point<f64>, n: usize, r0: f64, r1: f64) -> CompactSet<f64> {
    let phase = rng.gen_range(0.0..TAU);
    let pts = (0..n)
        .map(|k| {
            let a = phase + TAU * k as f64 / n as f64;
            let r = rng.gen_range(r0..=r1);
            Point::new(c.x + r * a.cos(), c.y + r * a.sin())
        })
        .collect();
    CompactSet::polygon(pts).expect("star polygons are simple")
}

fn center(rng: &mut ChaCha8Rng, spread: f64) -> Point<f64> {
    Point::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread))
}

fn polyline(rng: &mut ChaCha8Rng, spread: f64) -> CompactSet<f64> {
    let n = rng.gen_range(1..=4);
    let pts: Vec<Point<f64>> = (0..=n).map(|_| center(rng, spread)).collect();
    match Chain::new(pts) {
        Ok(c) => CompactSet::from_chains(vec![c]),
        Err(_) => CompactSet::from_chains(vec![Chain::point(center(rng, spread))]),
    }
}

/// Convex polygon: hull of random points in a disc of radius up to 1.
pub fn convex(rng: &mut ChaCha8Rng) -> CompactSet<f64> {
    loop {
        let c = center(rng, 0.5);
        let r = rng.gen_range(0.3..1.0);
        let n = rng.gen_range(3..=20);
        let pts: Vec<Point<f64>> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0.0..TAU);
                let s = r * rng.gen_range(0.0f64..1.0).sqrt();
                Point::new(c.x + s * a.cos(), c.y + s * a.sin())
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            if let Ok(k) = CompactSet::polygon(hull) {
                return k;
            }
        }
    }
}

/// A random compact set: a star, a star with a hole, two regions, a
/// region with loose chains, a convex polygon, or chains alone.
pub fn compact_set(rng: &mut ChaCha8Rng) -> CompactSet<f64> {
    let scale = rng.gen_range(0.5..3.0);
    let n = |rng: &mut ChaCha8Rng| rng.gen_range(3..=24);
    let k = match rng.gen_range(0..6) {
        0 => {
            let c = center(rng, 0.5);
            let m = n(rng);
            star(rng, c, m, 0.3, 1.0)
        }
        1 => {
            let c = center(rng, 0.5);
            let (m1, m2) = (n(rng), n(rng));
            let outer = star(rng, c, m1, 0.7, 1.0);
            let hole = star(rng, c, m2, 0.1, 0.4);
            difference(&outer, &hole)
        }
        2 => {
            let (c1, c2) = (center(rng, 1.0), center(rng, 1.0));
            let (m1, m2) = (n(rng), n(rng));
            let a = star(rng, c1, m1, 0.2, 0.7);
            let b = star(rng, c2, m2, 0.2, 0.7);
            union(&a, &b)
        }
        3 => {
            let c = center(rng, 0.5);
            let m = n(rng);
            let s = star(rng, c, m, 0.3, 0.8);
            let extra = if rng.gen_bool(0.5) {
                CompactSet::from_chains(vec![Chain::point(center(rng, 1.5))])
            } else {
                CompactSet::empty()
            };
            s.with(polyline(rng, 1.5)).with(extra)
        }
        4 => convex(rng),
        _ => {
            let a = polyline(rng, 1.0);
            a.with(polyline(rng, 1.0))
        }
    };
    k.map_points(|p| p.scale(scale))
}

/// A random compact set with positive area.
pub fn solid_set(rng: &mut ChaCha8Rng) -> CompactSet<f64> {
    loop {
        let k = compact_set(rng);
        if !k.regions().is_empty() {
            return k;
        }
    }
}

/// `(A, B)` with `B ⊂ A`: a star and a shrunken copy, optionally cut down
/// further by a random box.
pub fn inclusion_pair(rng: &mut ChaCha8Rng) -> (CompactSet<f64>, CompactSet<f64>) {
    let c = center(rng, 0.5);
    let n = rng.gen_range(3..=24);
    let phase = rng.gen_range(0.0..TAU);
    let radii: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..1.0)).collect();
    let shrink = rng.gen_range(0.3..0.95);
    let poly = |k: f64| {
        let pts = radii
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let a = phase + TAU * i as f64 / n as f64;
                Point::new(c.x + k * r * a.cos(), c.y + k * r * a.sin())
            })
            .collect();
        CompactSet::polygon(pts).expect("star polygons are simple")
    };
    let (a, mut b) = (poly(1.0), poly(shrink));
    if rng.gen_bool(0.5) {
        let cut = CompactSet::rectangle(c.x - 2.0, c.y - 2.0, c.x + rng.gen_range(-0.2..0.5), c.y + 2.0)
            .expect("valid rectangle");
        let inner = crate::clip::intersect(&b, &cut);
        if !inner.is_empty() {
            b = inner;
        }
    }
    (a, b)
}

pub fn direction(rng: &mut ChaCha8Rng) -> Direction<f64> {
    Direction::new(rng.gen_range(0.0..TAU))
}

pub fn point(rng: &mut ChaCha8Rng, spread: f64) -> Point<f64> {
    center(rng, spread)
}
