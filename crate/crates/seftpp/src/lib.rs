//! Homotopy-aware path planning for a tethered differential-drive robot,
//! with closed-form monotonicity predicates that let node expansion skip
//! per-waypoint tether simulation.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod homotopy;
pub mod planner;
pub mod primitives;
pub mod scenario;
pub mod sparsity;
pub mod svg;
pub mod tether;
pub mod worldmodel;

pub use error::Error;
