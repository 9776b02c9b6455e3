//! Curves used as interpolation spaces: the projective line and elliptic
//! curves, behind a common interface.

pub mod divisor;
pub mod elliptic;
pub mod p1;
pub(crate) mod series;

use crate::algebra::{FieldTower, Matrix};
use crate::error::Result;

pub use divisor::{ClosedPoint, Divisor};

/// What the synthesis engine needs from a curve.
pub trait Curve {
    type Point: ClosedPoint;
    type Function: Clone + std::fmt::Debug;

    fn tower(&self) -> &FieldTower;

    fn q(&self) -> u32 {
        self.tower().q()
    }

    fn genus(&self) -> u32;

    /// `l(D)` by a closed formula.
    fn l_dim(&self, d: &Divisor<Self::Point>) -> usize;

    /// Index of speciality `i(D) = l(K - D)`.
    fn i_dim(&self, d: &Divisor<Self::Point>) -> usize;

    /// A basis of `L(D)`.
    fn rr_basis(&self, d: &Divisor<Self::Point>) -> Result<Vec<Self::Function>>;

    /// `t_P^shift f mod t_P^u` in `A_q(deg P, u)`, as flat coordinates.
    fn eval(&self, f: &Self::Function, p: &Self::Point, u: u32, shift: i64) -> Result<Vec<u32>>;

    /// Evaluations of several functions at one thickened point, as the
    /// columns of a `(deg P) u x fs.len()` matrix.
    fn eval_matrix(&self, fs: &[Self::Function], p: &Self::Point, u: u32, shift: i64) -> Result<Matrix> {
        let rows = (p.degree() * u) as usize;
        let cols = fs.iter().map(|f| self.eval(f, p, u, shift)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_cols(&cols, rows))
    }

    /// Number of closed points of degree `d`.
    fn count_closed_points(&self, d: u32) -> u64;

    /// The first `limit` closed points of degree `d` in canonical order.
    fn points_of_degree(&self, d: u32, limit: usize) -> Result<Vec<Self::Point>>;
}
