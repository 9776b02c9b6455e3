//! Finite-dimensional algebras given by structure constants.

use super::fq::Fq;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// An `F_q`-algebra of dimension `d` with `e_i e_j = sum_k c_{ijk} e_k`.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    base: Fq,
    dim: usize,
    /// `c[(i * d + j) * d + k]`.
    consts: Vec<u32>,
    unity: Option<Vec<u32>>,
    commutative: bool,
    /// Known to be a field (set by constructors that know it).
    field_hint: bool,
}

// The field hint is bookkeeping, not part of the algebra.
impl PartialEq for StructureAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.dim == other.dim && self.consts == other.consts && self.unity == other.unity
    }
}

impl Eq for StructureAlgebra {}

impl StructureAlgebra {
    /// `consts[i][j]` is the coordinate vector of `e_i e_j`.
    pub fn new(base: Fq, dim: usize, consts: Vec<u32>, unity: Option<Vec<u32>>) -> Result<Self> {
        if consts.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "{} structure constants for dimension {dim}",
                consts.len()
            )));
        }
        if consts.iter().any(|&c| c >= base.q()) {
            return Err(Error::Dimension("structure constant out of range".into()));
        }
        let mut alg = StructureAlgebra { base, dim, consts, unity: None, commutative: false, field_hint: false };
        alg.commutative = (0..dim).all(|i| (0..dim).all(|j| alg.basis_product(i, j) == alg.basis_product(j, i)));
        if let Some(u) = unity {
            if u.len() != dim {
                return Err(Error::Dimension("unity vector length".into()));
            }
            for i in 0..dim {
                let mut e = vec![0; dim];
                e[i] = 1;
                if alg.mul(&u, &e) != e || alg.mul(&e, &u) != e {
                    return Err(Error::Precondition(format!("unity fails on basis vector {i}")));
                }
            }
            alg.unity = Some(u);
        }
        Ok(alg)
    }

    pub(crate) fn with_field_hint(mut self, is_field: bool) -> Self {
        self.field_hint = is_field;
        self
    }

    /// The zero algebra of dimension 0.
    pub fn zero(base: Fq) -> Self {
        StructureAlgebra { base, dim: 0, consts: Vec::new(), unity: None, commutative: true, field_hint: false }
    }

    /// The base field as a one-dimensional algebra.
    pub fn base_field(base: Fq) -> Self {
        StructureAlgebra::new(base, 1, vec![1], Some(vec![1])).unwrap().with_field_hint(true)
    }

    pub fn base(&self) -> &Fq {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn consts(&self) -> &[u32] {
        &self.consts
    }

    pub fn unity(&self) -> Option<&[u32]> {
        self.unity.as_deref()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn field_hint(&self) -> bool {
        self.field_hint
    }

    /// Coordinates of `e_i e_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let s = (i * self.dim + j) * self.dim;
        &self.consts[s..s + self.dim]
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = &self.base;
        let mut out = vec![0; self.dim];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = f.mulu(a, b);
                for (k, &s) in self.basis_product(i, j).iter().enumerate() {
                    if s != 0 {
                        out[k] = f.addu(out[k], f.mulu(c, s));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_mul_matrix(&self, x: &[u32]) -> Matrix {
        let cols: Vec<Vec<u32>> = (0..self.dim)
            .map(|j| {
                let mut e = vec![0; self.dim];
                e[j] = 1;
                self.mul(x, &e)
            })
            .collect();
        Matrix::from_cols(&cols, self.dim)
    }

    /// The direct product `A x B` (basis of `A` then basis of `B`).
    pub fn product(&self, other: &StructureAlgebra) -> Result<StructureAlgebra> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(format!("{:?} vs {:?}", self.base, other.base)));
        }
        let (da, db) = (self.dim, other.dim);
        let d = da + db;
        let mut c = vec![0; d * d * d];
        for i in 0..da {
            for j in 0..da {
                for (k, &v) in self.basis_product(i, j).iter().enumerate() {
                    c[(i * d + j) * d + k] = v;
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                for (k, &v) in other.basis_product(i, j).iter().enumerate() {
                    c[((da + i) * d + da + j) * d + da + k] = v;
                }
            }
        }
        let unity = match (&self.unity, &other.unity) {
            (Some(a), Some(b)) => Some([a.clone(), b.clone()].concat()),
            _ if da == 0 => other.unity.clone(),
            _ if db == 0 => self.unity.clone(),
            _ => None,
        };
        let mut alg = StructureAlgebra::new(self.base.clone(), d, c, unity)?;
        alg.field_hint = (da == 0 && other.field_hint) || (db == 0 && self.field_hint);
        Ok(alg)
    }

    /// The tensor product `A (x) B`; basis `e_i (x) f_j` has index `i * dim B + j`.
    pub fn tensor(&self, other: &StructureAlgebra) -> Result<StructureAlgebra> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(format!("{:?} vs {:?}", self.base, other.base)));
        }
        let f = &self.base;
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut c = vec![0; d * d * d];
        for i1 in 0..da {
            for j1 in 0..db {
                for i2 in 0..da {
                    for j2 in 0..db {
                        let (x, y) = (i1 * db + j1, i2 * db + j2);
                        let pa = self.basis_product(i1, i2);
                        let pb = other.basis_product(j1, j2);
                        for (ka, &va) in pa.iter().enumerate() {
                            if va == 0 {
                                continue;
                            }
                            for (kb, &vb) in pb.iter().enumerate() {
                                c[(x * d + y) * d + ka * db + kb] = f.mulu(va, vb);
                            }
                        }
                    }
                }
            }
        }
        let unity = match (&self.unity, &other.unity) {
            (Some(a), Some(b)) => {
                let mut u = vec![0; d];
                for i in 0..da {
                    for j in 0..db {
                        u[i * db + j] = f.mulu(a[i], b[j]);
                    }
                }
                Some(u)
            }
            _ => None,
        };
        StructureAlgebra::new(f.clone(), d, c, unity)
    }

    /// Whether the algebra has no zero divisors, by exhaustive scan when
    /// `q^d <= 2^16`; otherwise the constructor hint.
    pub fn is_field(&self) -> bool {
        if self.dim == 0 || self.unity.is_none() || !self.commutative {
            return false;
        }
        let q = self.base.q() as u64;
        let Some(total) = q.checked_pow(self.dim as u32).filter(|&t| t <= 1 << 16) else {
            return self.field_hint;
        };
        (1..total).all(|idx| {
            let x = self.index_to_vec(idx);
            self.left_mul_matrix(&x).rank(&self.base) == self.dim
        })
    }

    /// The `idx`-th vector in base-`q` little-endian order.
    pub fn index_to_vec(&self, mut idx: u64) -> Vec<u32> {
        let q = self.base.q() as u64;
        (0..self.dim)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asym_gap_algebra_is_commutative_not_unital() {
        let f2 = Fq::new(2).unwrap();
        // e1 e2 = e2 e1 = e1, squares vanish
        let mut c = vec![0; 8];
        c[(0 * 2 + 1) * 2] = 1;
        c[(1 * 2 + 0) * 2] = 1;
        let a = StructureAlgebra::new(f2, 2, c, None).unwrap();
        assert!(a.is_commutative());
        assert!(!a.is_field());
    }

    #[test]
    fn bad_unity_rejected() {
        let f2 = Fq::new(2).unwrap();
        assert!(StructureAlgebra::new(f2, 1, vec![1], Some(vec![0])).is_err());
    }
}
