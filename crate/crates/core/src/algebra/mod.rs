//! Finite fields, polynomials, linear algebra and the finite-dimensional
//! algebras whose multiplication is being decomposed.

pub mod ext;
pub mod fq;
pub mod hensel;
pub mod matrix;
pub mod poly;
pub mod structure;
pub mod truncated;

pub use ext::{artin_schreier_solve, gf_embed, irreducibles, Embedding, ExtField, FieldTower};
pub use fq::{Field, Fq};
pub use hensel::{hensel_lift, HenselLift};
pub use matrix::{LinearMap, Matrix};
pub use structure::StructureAlgebra;
pub use truncated::TruncatedAlgebra;
