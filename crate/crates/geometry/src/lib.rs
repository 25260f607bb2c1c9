//! Convex polygon kernel for satisfaction sets in the `(t, t*)` plane.
//!
//! Satisfaction sets of STL* formulas over piecewise-linear signals are finite
//! unions of convex polygons inside the square `[0, r]²`, where `r` is the
//! signal length. This crate provides the small set of operations the monitor
//! needs: half-plane clipping, convex intersection, union, complement,
//! horizontal erosion along the time axis, the diagonal trace used by the
//! freeze operator and merging of adjacent pieces.
//!
//! Coordinates are `f64`. `x` is the current time `t` and `y` the frozen time
//! `t*`. All set operations treat points within `eps` of a polygon boundary as
//! don't-care: polygons are stored topologically closed, and callers must not
//! rely on membership of boundary points.

mod point;
mod polygon;
mod region;
mod slab;
pub mod svg;

pub use point::{BBox, Point};
pub use polygon::{ConvexPolygon, Membership};
pub use region::{Domain, Region, DEFAULT_REL_EPS};
pub use slab::cluster_levels;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon vertex {index} is not finite")]
    NonFinite { index: usize },
    #[error("polygon is not convex at vertex {index}")]
    NotConvex { index: usize },
    #[error("domain size must be positive and finite, got {0}")]
    InvalidDomain(f64),
    #[error("erosion interval must satisfy 0 <= lo <= hi, got ({lo}, {hi})")]
    InvalidShift { lo: f64, hi: f64 },
}
