//! Exact counting and enumeration of full and partial triangulations of
//! planar point sets, with the combinatorial tools around them: quasi-convex
//! classification, characteristic vectors of polylines and polygons, point
//! set generators, and a corpus verification harness.

pub mod catalan;
pub mod charvec;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod generators;
pub mod geom;
pub mod harness;
pub mod structure;

pub use catalan::{catalan, w, BigCount};
pub use error::{Error, Result};
pub use geom::{Point, PointSet};
