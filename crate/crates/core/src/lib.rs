//! Empty-rectangle graphs of planar point sets: compact biclique covers,
//! box hulls, approximate rectangle depth and the experiments around them.
//!
//! Everything is generic over an exact signed integer coordinate type. The
//! aliases below fix it to `i64` (or `i32` where memory matters).

pub mod chains;
pub mod geom;
pub mod oracle;
pub mod rangestack;
pub mod cover;
pub mod boxhull;
pub mod depth;
pub mod lab;

pub use geom::{validate, Coord, GeomError};

pub type Point64 = geom::Point<i64>;
pub type PointSet64 = geom::PointSet<i64>;
pub type Rect64 = geom::Rect<i64>;
pub type QueryPoint64 = geom::QueryPoint<i64>;
pub type BoxHull64 = boxhull::BoxHull<i64>;
pub type DepthIndex64 = depth::DepthIndex<i64>;

pub type Point32 = geom::Point<i32>;
pub type PointSet32 = geom::PointSet<i32>;
pub type Rect32 = geom::Rect<i32>;
pub type QueryPoint32 = geom::QueryPoint<i32>;
