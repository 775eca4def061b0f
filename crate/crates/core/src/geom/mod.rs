//! Planar value types: points, directions, rings, regions, chains and the
//! compact sets built from them.

mod io;
mod measure;
mod shapes;
mod simplify;
mod transform;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use io::{read_set, set_from_json, set_to_json, write_set};
pub(crate) use measure::point_in_ring;
pub use measure::{
    area, boundary_length, convex_hull, diameter, distance_to_set, perimeter, point_in_regions,
    point_segment_distance, second_moment, signed_area,
};
pub use shapes::{BallFit, DEFAULT_BALL_VERTICES};
pub use simplify::{remove_collinear, simplify, simplify_ring};
pub use transform::{reflect, rotate, translate};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn origin() -> Self {
        Point::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2-d cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    #[inline]
    pub fn scale(self, k: T) -> Self {
        Point::new(self.x * k, self.y * k)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Bit pattern of the coordinates, used as an exact hash key.
    #[inline]
    pub(crate) fn key(self) -> (u64, u64) {
        (self.x.as_f64().to_bits(), self.y.as_f64().to_bits())
    }

    pub fn cast<U: Scalar>(self) -> Point<U> {
        Point::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T: Scalar> Add for Point<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

/// A unit direction in the plane, stored by its angle normalized to `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction<T> {
    theta: T,
}

impl<T: Scalar> Direction<T> {
    pub fn new(theta: T) -> Self {
        let two_pi = T::TAU();
        let mut t = theta % two_pi;
        if t < T::zero() {
            t = t + two_pi;
        }
        if t >= two_pi {
            t = T::zero();
        }
        Direction { theta: t }
    }

    pub fn e1() -> Self {
        Direction::new(T::zero())
    }

    pub fn e2() -> Self {
        Direction::new(T::FRAC_PI_2())
    }

    pub fn from_vector(v: Point<T>) -> Result<Self> {
        if !(v.norm() > T::zero()) || !v.is_finite() {
            return Err(Error::InvalidArgument("zero or non-finite direction vector".into()));
        }
        Ok(Direction::new(v.y.atan2(v.x)))
    }

    #[inline]
    pub fn theta(self) -> T {
        self.theta
    }

    /// `(cos θ, sin θ)`, exact on the coordinate axes.
    #[inline]
    pub fn unit(self) -> Point<T> {
        let (o, z) = (T::one(), T::zero());
        let t = self.theta;
        if t == z {
            Point::new(o, z)
        } else if t == T::FRAC_PI_2() {
            Point::new(z, o)
        } else if t == T::PI() {
            Point::new(-o, z)
        } else if t == T::PI() + T::FRAC_PI_2() {
            Point::new(z, -o)
        } else {
            let (s, c) = t.sin_cos();
            Point::new(c, s)
        }
    }

    /// The unit vector spanning `u⊥`, i.e. `u` turned by +π/2.
    #[inline]
    pub fn perp(self) -> Point<T> {
        let u = self.unit();
        Point::new(-u.y, u.x)
    }

    /// Angle between the lines spanned by `self` and `other`, in `[0, π/2]`.
    pub fn line_angle(self, other: Self) -> T {
        let pi = T::PI();
        let mut d = (other.theta - self.theta) % pi;
        if d < T::zero() {
            d = d + pi;
        }
        d.min(pi - d)
    }
}

/// A closed polygonal curve. The closing edge from the last vertex back to
/// the first is implicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ring<T> {
    vertices: Vec<Point<T>>,
}

impl<T: Scalar> Ring<T> {
    /// Validating constructor: at least three finite vertices, non-zero
    /// signed area and no self-intersections.
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "ring has {} vertices, need at least 3",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidGeometry(format!("vertex {i} is not finite")));
        }
        let ring = Ring { vertices };
        if ring.signed_area() == T::zero() {
            return Err(Error::InvalidGeometry("ring has zero signed area".into()));
        }
        if let Some((i, j)) = measure::first_self_intersection(&ring.vertices) {
            return Err(Error::InvalidGeometry(format!(
                "ring is not simple: edges {i} and {j} intersect"
            )));
        }
        Ok(ring)
    }

    /// Builds a ring without validation. Callers guarantee the invariants.
    pub fn from_vertices_unchecked(vertices: Vec<Point<T>>) -> Self {
        Ring { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> T {
        signed_area(&self.vertices)
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > T::zero()
    }

    pub fn reversed(mut self) -> Self {
        self.vertices.reverse();
        self
    }

    /// Edges as `(start, end)` pairs including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub(crate) fn map(&self, f: impl Fn(Point<T>) -> Point<T>) -> Self {
        Ring {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// A polygon with holes: outer ring counterclockwise, holes clockwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    outer: Ring<T>,
    holes: Vec<Ring<T>>,
}

impl<T: Scalar> Region<T> {
    /// Orients the rings and checks that every hole vertex lies inside the
    /// outer ring.
    pub fn new(outer: Ring<T>, holes: Vec<Ring<T>>) -> Result<Self> {
        let outer = if outer.is_ccw() { outer } else { outer.reversed() };
        let mut oriented = Vec::with_capacity(holes.len());
        for (k, h) in holes.into_iter().enumerate() {
            let h = if h.is_ccw() { h.reversed() } else { h };
            if let Some(v) = h
                .vertices()
                .iter()
                .find(|&&v| !measure::point_in_ring(v, outer.vertices()))
            {
                return Err(Error::InvalidGeometry(format!(
                    "hole {k} vertex ({}, {}) lies outside the outer ring",
                    v.x, v.y
                )));
            }
            oriented.push(h);
        }
        Ok(Region {
            outer,
            holes: oriented,
        })
    }

    pub fn from_rings_unchecked(outer: Ring<T>, holes: Vec<Ring<T>>) -> Self {
        Region { outer, holes }
    }

    pub fn simple(outer: Ring<T>) -> Result<Self> {
        Region::new(outer, Vec::new())
    }

    #[inline]
    pub fn outer(&self) -> &Ring<T> {
        &self.outer
    }

    #[inline]
    pub fn holes(&self) -> &[Ring<T>] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring<T>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> T {
        self.outer.signed_area().abs()
            - self
                .holes
                .iter()
                .map(|h| h.signed_area().abs())
                .fold(T::zero(), |a, b| a + b)
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(Ring::len).sum()
    }
}

/// A measure-zero polyline. A single-point chain represents an isolated
/// point of the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain<T> {
    points: Vec<Point<T>>,
}

impl<T: Scalar> Chain<T> {
    /// Consecutive duplicate points are dropped; at least one point is
    /// required.
    pub fn new(points: Vec<Point<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGeometry("chain has no points".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidGeometry(format!("chain point {i} is not finite")));
        }
        let mut pts: Vec<Point<T>> = Vec::with_capacity(points.len());
        for p in points {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        Ok(Chain { points: pts })
    }

    pub fn segment(a: Point<T>, b: Point<T>) -> Self {
        Chain::new(vec![a, b]).expect("finite segment endpoints")
    }

    pub fn point(p: Point<T>) -> Self {
        Chain { points: vec![p] }
    }

    #[inline]
    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn is_point(&self) -> bool {
        self.points.len() == 1
    }

    /// Segments of the polyline; empty for a point chain.
    pub fn segments(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> T {
        self.segments()
            .map(|(a, b)| a.dist(b))
            .fold(T::zero(), |a, b| a + b)
    }

    pub(crate) fn map(&self, f: impl Fn(Point<T>) -> Point<T>) -> Self {
        Chain {
            points: self.points.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// A planar compact set: a finite union of polygonal regions with pairwise
/// disjoint interiors, plus measure-zero chains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSet<T> {
    regions: Vec<Region<T>>,
    chains: Vec<Chain<T>>,
}

impl<T: Scalar> CompactSet<T> {
    /// Validated constructor for external input. Rejects empty sets and
    /// regions with overlapping interiors.
    pub fn new(regions: Vec<Region<T>>, chains: Vec<Chain<T>>) -> Result<Self> {
        if regions.is_empty() && chains.is_empty() {
            return Err(Error::EmptySet("a compact set needs a region or a chain".into()));
        }
        let set = CompactSet { regions, chains };
        if set.regions.len() > 1 {
            let eps = T::geom_eps();
            for i in 0..set.regions.len() {
                for j in (i + 1)..set.regions.len() {
                    let a = CompactSet::from_regions(vec![set.regions[i].clone()]);
                    let b = CompactSet::from_regions(vec![set.regions[j].clone()]);
                    let overlap = crate::clip::boolean_area(&a, &b, crate::clip::BoolOp::Intersection);
                    if overlap > eps {
                        return Err(Error::InvalidGeometry(format!(
                            "regions {i} and {j} overlap (area {overlap})"
                        )));
                    }
                }
            }
        }
        Ok(set)
    }

    pub fn from_parts_unchecked(regions: Vec<Region<T>>, chains: Vec<Chain<T>>) -> Self {
        CompactSet { regions, chains }
    }

    pub fn from_regions(regions: Vec<Region<T>>) -> Self {
        CompactSet {
            regions,
            chains: Vec::new(),
        }
    }

    pub fn from_chains(chains: Vec<Chain<T>>) -> Self {
        CompactSet {
            regions: Vec::new(),
            chains,
        }
    }

    pub fn empty() -> Self {
        CompactSet {
            regions: Vec::new(),
            chains: Vec::new(),
        }
    }

    #[inline]
    pub fn regions(&self) -> &[Region<T>] {
        &self.regions
    }

    #[inline]
    pub fn chains(&self) -> &[Chain<T>] {
        &self.chains
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty() && self.chains.is_empty()
    }

    /// Set union without any merging: regions and chains are concatenated.
    /// Callers guarantee the region interiors stay disjoint.
    pub fn with(mut self, other: CompactSet<T>) -> Self {
        self.regions.extend(other.regions);
        self.chains.extend(other.chains);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.regions.iter().map(Region::vertex_count).sum::<usize>()
            + self.chains.iter().map(|c| c.points().len()).sum::<usize>()
    }

    /// All ring and chain vertices.
    pub fn vertices(&self) -> impl Iterator<Item = Point<T>> + '_ {
        self.regions
            .iter()
            .flat_map(|r| r.rings().flat_map(|ring| ring.vertices().iter().copied()))
            .chain(self.chains.iter().flat_map(|c| c.points().iter().copied()))
    }

    /// Axis-aligned bounding box `(min, max)`, `None` for the empty set.
    pub fn bbox(&self) -> Option<(Point<T>, Point<T>)> {
        let mut it = self.vertices();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Largest distance from `c` to a vertex of the set.
    pub fn radius_about(&self, c: Point<T>) -> T {
        self.vertices().map(|p| p.dist(c)).fold(T::zero(), T::max)
    }

    pub(crate) fn map_points(&self, f: impl Fn(Point<T>) -> Point<T> + Copy) -> Self {
        CompactSet {
            regions: self
                .regions
                .iter()
                .map(|r| Region {
                    outer: r.outer.map(f),
                    holes: r.holes.iter().map(|h| h.map(f)).collect(),
                })
                .collect(),
            chains: self.chains.iter().map(|c| c.map(f)).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> CompactSet<U> {
        let ring = |r: &Ring<T>| Ring::<U>::from_vertices_unchecked(r.vertices().iter().map(|p| p.cast()).collect());
        CompactSet {
            regions: self
                .regions
                .iter()
                .map(|r| Region::from_rings_unchecked(ring(&r.outer), r.holes.iter().map(ring).collect()))
                .collect(),
            chains: self
                .chains
                .iter()
                .map(|c| Chain {
                    points: c.points.iter().map(|p| p.cast()).collect(),
                })
                .collect(),
        }
    }
}

/// Closed ball `B_{r,p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball<T> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Scalar> Ball<T> {
    pub fn new(center: Point<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn centered(radius: T) -> Result<Self> {
        Ball::new(Point::origin(), radius)
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        p.dist(self.center) <= self.radius
    }

    pub fn area(&self) -> T {
        T::PI() * self.radius * self.radius
    }
}

/// The closed centered ball with the same area as `set`.
pub fn equimeasurable_ball<T: Scalar>(set: &CompactSet<T>) -> Result<Ball<T>> {
    let a = area(set);
    if !(a > T::zero()) {
        return Err(Error::NullSet);
    }
    Ball::centered((a / T::PI()).sqrt())
}
