use serde::{Deserialize, Serialize};

use super::{convex_hull, Ball, Chain, CompactSet, Point, Region, Ring};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_BALL_VERTICES: usize = 256;

/// How a regular polygon approximates its circle: vertices on the circle
/// (`Inscribed`, polygon inside the disk) or edges tangent to it
/// (`Circumscribed`, polygon contains the disk).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallFit {
    Inscribed,
    Circumscribed,
}

impl<T: Scalar> Ball<T> {
    /// Regular `n`-gon approximation, first vertex at angle 0.
    pub fn polygon(&self, n: usize, fit: BallFit) -> Region<T> {
        let n = n.max(3);
        let nt = T::lit(n as f64);
        let rho = match fit {
            BallFit::Inscribed => self.radius,
            BallFit::Circumscribed => self.radius / (T::PI() / nt).cos(),
        };
        let pts = (0..n)
            .map(|k| {
                let a = T::TAU() * T::lit(k as f64) / nt;
                let (s, c) = a.sin_cos();
                Point::new(self.center.x + rho * c, self.center.y + rho * s)
            })
            .collect();
        Region::from_rings_unchecked(Ring::from_vertices_unchecked(pts), Vec::new())
    }

    pub fn to_set(&self, n: usize, fit: BallFit) -> CompactSet<T> {
        CompactSet::from_regions(vec![self.polygon(n, fit)])
    }
}

impl<T: Scalar> CompactSet<T> {
    /// Axis-parallel rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: T, y0: T, x1: T, y1: T) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::InvalidGeometry("rectangle needs x0 < x1 and y0 < y1".into()));
        }
        let ring = Ring::from_vertices_unchecked(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ]);
        Ok(CompactSet::from_regions(vec![Region::from_rings_unchecked(ring, Vec::new())]))
    }

    /// `[0, 1]²`.
    pub fn unit_square() -> Self {
        CompactSet::rectangle(T::zero(), T::zero(), T::one(), T::one()).expect("valid square")
    }

    /// Simple polygon from a vertex list, validated.
    pub fn polygon(vertices: Vec<Point<T>>) -> Result<Self> {
        Ok(CompactSet::from_regions(vec![Region::simple(Ring::new(vertices)?)?]))
    }

    pub fn segment(a: Point<T>, b: Point<T>) -> Self {
        CompactSet::from_chains(vec![Chain::segment(a, b)])
    }

    pub fn point(p: Point<T>) -> Self {
        CompactSet::from_chains(vec![Chain::point(p)])
    }

    /// Convex hull of all vertices as a single region, or as a chain when
    /// the hull is degenerate.
    pub fn hull(&self) -> Self {
        let pts: Vec<Point<T>> = self.vertices().collect();
        let h = convex_hull(&pts);
        match h.len() {
            0 => CompactSet::empty(),
            1 => CompactSet::point(h[0]),
            2 => CompactSet::segment(h[0], h[1]),
            _ => CompactSet::from_regions(vec![Region::from_rings_unchecked(
                Ring::from_vertices_unchecked(h),
                Vec::new(),
            )]),
        }
    }
}
