use super::{CompactSet, Direction, Point, Region, Ring};
use crate::scalar::Scalar;

/// Rotation about the origin by `angle` radians (counterclockwise).
pub fn rotate<T: Scalar>(set: &CompactSet<T>, angle: T) -> CompactSet<T> {
    let (s, c) = angle.sin_cos();
    set.map_points(move |p| Point::new(c * p.x - s * p.y, s * p.x + c * p.y))
}

pub fn translate<T: Scalar>(set: &CompactSet<T>, v: Point<T>) -> CompactSet<T> {
    set.map_points(move |p| p + v)
}

/// Reflection across the line `u⊥` through the origin. Ring orientation is
/// restored after the mirror flip.
pub fn reflect<T: Scalar>(set: &CompactSet<T>, u: Direction<T>) -> CompactSet<T> {
    let n = u.unit();
    let two = T::two();
    let mirrored = set.map_points(move |p| p - n * (two * p.dot(n)));
    let fix = |r: &Ring<T>| r.clone().reversed();
    CompactSet::from_parts_unchecked(
        mirrored
            .regions()
            .iter()
            .map(|r| Region::from_rings_unchecked(fix(r.outer()), r.holes().iter().map(fix).collect()))
            .collect(),
        mirrored.chains().to_vec(),
    )
}
