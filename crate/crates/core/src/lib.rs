//! Planar Steiner symmetrization engine.
//!
//! The geometry kernel ([`geom`], [`clip`], [`symmetrize`], [`raster`]) is
//! generic over the coordinate type; the aliases below fix it to `f64` or
//! `f32`. Direction sequences, trajectories and experiments work in `f64`.

pub mod clip;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod raster;
pub mod scalar;
pub mod sequences;
mod sweep;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Point64 = geom::Point<f64>;
pub type Direction64 = geom::Direction<f64>;
pub type Ring64 = geom::Ring<f64>;
pub type Region64 = geom::Region<f64>;
pub type Chain64 = geom::Chain<f64>;
pub type CompactSet64 = geom::CompactSet<f64>;
pub type Ball64 = geom::Ball<f64>;

pub type Point32 = geom::Point<f32>;
pub type Direction32 = geom::Direction<f32>;
pub type CompactSet32 = geom::CompactSet<f32>;
pub type Ball32 = geom::Ball<f32>;
