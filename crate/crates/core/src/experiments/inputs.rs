use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, read_set, rotate, Ball, BallFit, CompactSet, Point, DEFAULT_BALL_VERTICES};

const BUILTINS: [&str; 9] = [
    "square",
    "centered-square",
    "rotated-square",
    "ball",
    "segment",
    "segment-ball",
    "hull-segment-ball",
    "klain",
    "triangle",
];

pub fn builtin_names() -> &'static [&'static str] {
    &BUILTINS
}

/// Vertical segment of length `len` centered at the origin.
pub(crate) fn vertical_segment(len: f64) -> CompactSet<f64> {
    CompactSet::segment(Point::new(0.0, -0.5 * len), Point::new(0.0, 0.5 * len))
}

fn disc(r: f64, n: usize) -> Result<CompactSet<f64>> {
    Ok(Ball::centered(r)?.to_set(n, BallFit::Inscribed))
}

/// `ℓ ∪ B_r`: a vertical segment through the center of a small disc.
pub(crate) fn segment_ball(r: f64, len: f64, n: usize) -> Result<CompactSet<f64>> {
    Ok(disc(r, n)?.with(vertical_segment(len)))
}

/// `conv(ℓ ∪ B_r)`.
pub(crate) fn hull_segment_ball(r: f64, len: f64, n: usize) -> Result<CompactSet<f64>> {
    let mut pts: Vec<Point<f64>> = disc(r, n)?.vertices().collect();
    pts.push(Point::new(0.0, -0.5 * len));
    pts.push(Point::new(0.0, 0.5 * len));
    CompactSet::polygon(convex_hull(&pts))
}

/// Nonconvex L-shaped polygon plus a detached polyline.
pub(crate) fn klain_input() -> CompactSet<f64> {
    let p = Point::new;
    let l = CompactSet::polygon(vec![
        p(-0.6, -0.4),
        p(0.5, -0.4),
        p(0.5, -0.1),
        p(-0.2, -0.1),
        p(-0.2, 0.6),
        p(-0.6, 0.6),
    ])
    .expect("valid L shape");
    let chain = CompactSet::from_chains(vec![
        crate::geom::Chain::new(vec![p(0.1, 0.2), p(0.5, 0.3), p(0.6, 0.7)]).expect("valid chain"),
    ]);
    l.with(chain)
}

pub fn builtin_shape(name: &str) -> Result<CompactSet<f64>> {
    let n = DEFAULT_BALL_VERTICES;
    match name {
        "square" => Ok(CompactSet::unit_square()),
        "centered-square" => CompactSet::rectangle(-0.5, -0.5, 0.5, 0.5),
        "rotated-square" => Ok(rotate(&CompactSet::rectangle(-0.5, -0.5, 0.5, 0.5)?, 0.3)),
        "ball" => disc(1.0, n),
        "segment" => Ok(vertical_segment(1.0)),
        "segment-ball" => segment_ball(0.1, 1.0, n),
        "hull-segment-ball" => hull_segment_ball(0.1, 1.0, n),
        "klain" => Ok(klain_input()),
        "triangle" => CompactSet::polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.2, 0.8)]),
        other => Err(Error::InvalidArgument(format!(
            "unknown builtin shape `{other}`; valid names: {}",
            BUILTINS.join(", ")
        ))),
    }
}

/// A builtin name, or otherwise a path to a set file.
pub fn resolve_input(s: &str) -> Result<CompactSet<f64>> {
    if BUILTINS.contains(&s) {
        builtin_shape(s)
    } else if Path::new(s).exists() {
        read_set(s)
    } else {
        Err(Error::InvalidArgument(format!(
            "`{s}` is neither a builtin shape ({}) nor an existing file",
            BUILTINS.join(", ")
        )))
    }
}
