//! Explicit bilinear multiplication algorithms for finite-field extensions and
//! truncated polynomial algebras, built by interpolation on the projective
//! line and on elliptic curves.

pub mod algebra;
pub mod bilinear;
pub mod bounds;
pub mod curve;
pub mod error;
pub mod synthesis;

pub use error::{Error, Result};
