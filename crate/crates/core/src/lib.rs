//! Exact-arithmetic toolkit for proximity and flatness bounds of integer
//! programs `max c.x s.t. Ax <= b`, and for planar self-polar polygons.
//!
//! Everything is computed with arbitrary-precision rationals; there is no
//! floating-point path.

pub mod generate;
pub mod hilbert;
pub mod linalg;
pub mod plane;
pub mod polyhedra;
pub mod proximity;
pub mod rational;
pub mod report;

pub use linalg::IntMatrix;
pub use rational::Rational;
