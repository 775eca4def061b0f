//! Scalar abstraction for the geometry kernel.
//!
//! Everything below `geom`, `clip`, `symmetrize` and `raster` is written
//! against [`Scalar`] so the kernel runs in `f64` (the default used by the
//! dynamics layer) or in `f32` for quick, low-precision previews.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A floating point coordinate type together with its snapping tolerance.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Absolute point-equality tolerance in length units. Inputs are assumed
    /// to be scaled to O(1) diameter.
    const GEOM_EPS: f64;

    /// Tolerance under which three points count as exactly collinear when
    /// cleaning up constructed rings.
    const COLLINEAR_EPS: f64;

    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the scalar type")
    }

    #[inline]
    fn geom_eps() -> Self {
        Self::lit(Self::GEOM_EPS)
    }

    #[inline]
    fn collinear_eps() -> Self {
        Self::lit(Self::COLLINEAR_EPS)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Scalar for f64 {
    const GEOM_EPS: f64 = 1e-9;
    const COLLINEAR_EPS: f64 = 1e-13;
}

impl Scalar for f32 {
    const GEOM_EPS: f64 = 1e-5;
    const COLLINEAR_EPS: f64 = 1e-7;
}
