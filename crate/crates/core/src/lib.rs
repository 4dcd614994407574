//! Numerical laboratory for boundary uniqueness of holomorphic functions on
//! the upper half-disc: winding-index profiles along semicircles, their jump
//! and telescoping identities, Blaschke products with certified tails,
//! vanishing-order estimation, and Riemann-map envelopes at analytic cusps.

pub mod blaschke;
pub mod boundary;
pub mod contour;
pub mod cusp;
pub mod error;
pub mod factory;
pub mod function;
pub mod geometry;
pub mod profile;
pub mod quadrature;
pub mod suite;

pub use error::{Error, Result};
pub use function::{FunctionHandle, Placement, ZeroRecord};
pub use geometry::{ComplexPoint, Orientation, PathSpec, Piece, Region};
pub use num_complex::Complex64;
