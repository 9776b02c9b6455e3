use std::fmt;

use crate::algebra::{Fq, Matrix, StructureAlgebra};
use crate::error::{Error, Result};

/// A bilinear multiplication algorithm `xy = sum_i phi_i(x) psi_i(y) w_i`
/// for an algebra given by structure constants.
///
/// `phi` and `psi` are `n x d` (row `i` is the form `phi_i`), `w` is `d x n`
/// (column `i` is `w_i`).
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearAlgorithm {
    algebra: StructureAlgebra,
    phi: Matrix,
    psi: Matrix,
    w: Matrix,
    symmetric: bool,
}

/// Outcome of [`BilinearAlgorithm::verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    /// First basis pair `(a, b)` (0-based, row-major) where the identity fails.
    Fails(usize, usize),
}

impl Verdict {
    pub fn ok(self) -> bool {
        self == Verdict::Verified
    }
}

impl fmt::Debug for BilinearAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BilinearAlgorithm(q={}, dim={}, n={}, sym={})",
            self.q(),
            self.dim(),
            self.len(),
            self.symmetric
        )
    }
}

impl BilinearAlgorithm {
    pub fn new(algebra: StructureAlgebra, phi: Matrix, psi: Matrix, w: Matrix, symmetric: bool) -> Result<Self> {
        let d = algebra.dim();
        let n = phi.rows();
        if phi.cols() != d || psi.cols() != d || psi.rows() != n || w.rows() != d || w.cols() != n {
            return Err(Error::Dimension(format!(
                "dim {d}: phi {}x{}, psi {}x{}, w {}x{}",
                phi.rows(),
                phi.cols(),
                psi.rows(),
                psi.cols(),
                w.rows(),
                w.cols()
            )));
        }
        if symmetric && phi != psi {
            return Err(Error::Precondition("symmetric algorithm needs phi = psi".into()));
        }
        Ok(BilinearAlgorithm { algebra, phi, psi, w, symmetric })
    }

    /// Symmetric algorithm with `psi = phi`.
    pub fn symmetric(algebra: StructureAlgebra, phi: Matrix, w: Matrix) -> Result<Self> {
        let psi = phi.clone();
        Self::new(algebra, phi, psi, w, true)
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn base(&self) -> &Fq {
        self.algebra.base()
    }

    pub fn q(&self) -> u32 {
        self.base().q()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Number of bilinear multiplications.
    pub fn len(&self) -> usize {
        self.phi.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Evaluates the algorithm on a pair of vectors.
    pub fn apply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.base();
        let px = self.phi.mul_vec(f, x);
        let py = self.psi.mul_vec(f, y);
        let prod: Vec<u32> = px.iter().zip(&py).map(|(&a, &b)| f.mulu(a, b)).collect();
        self.w.mul_vec(f, &prod)
    }

    /// Checks the decomposition on every pair of basis vectors, which by
    /// bilinearity is equivalent to checking it everywhere.
    pub fn verify(&self) -> Verdict {
        if self.q() == 2 {
            return self.verify_f2();
        }
        let f = self.base();
        let (d, n) = (self.dim(), self.len());
        let wcols: Vec<Vec<u32>> = (0..n).map(|i| self.w.col(i)).collect();
        let mut acc = vec![0u32; d];
        for a in 0..d {
            for b in 0..d {
                acc.iter_mut().for_each(|v| *v = 0);
                for (i, wc) in wcols.iter().enumerate() {
                    let (x, y) = (self.phi.get(i, a), self.psi.get(i, b));
                    if x == 0 || y == 0 {
                        continue;
                    }
                    let c = f.mulu(x, y);
                    for (k, &wk) in wc.iter().enumerate() {
                        if wk != 0 {
                            acc[k] = f.addu(acc[k], f.mulu(c, wk));
                        }
                    }
                }
                if acc != self.algebra.basis_product(a, b) {
                    return Verdict::Fails(a, b);
                }
            }
        }
        Verdict::Verified
    }

    /// Same check over `F_2` with bit-packed rows.
    fn verify_f2(&self) -> Verdict {
        let (d, n) = (self.dim(), self.len());
        let pack = |bits: &mut dyn Iterator<Item = u32>, len: usize| -> Vec<u64> {
            let mut v = vec![0u64; len.div_ceil(64)];
            for (i, b) in bits.enumerate() {
                if b != 0 {
                    v[i / 64] |= 1 << (i % 64);
                }
            }
            v
        };
        let phi_cols: Vec<Vec<u64>> = (0..d).map(|a| pack(&mut (0..n).map(|i| self.phi.get(i, a)), n)).collect();
        let psi_cols: Vec<Vec<u64>> = (0..d).map(|b| pack(&mut (0..n).map(|i| self.psi.get(i, b)), n)).collect();
        let wcols: Vec<Vec<u64>> = (0..n).map(|i| pack(&mut (0..d).map(|k| self.w.get(k, i)), d)).collect();
        let words = d.div_ceil(64);
        let mut acc = vec![0u64; words];
        for a in 0..d {
            for b in 0..d {
                acc.iter_mut().for_each(|v| *v = 0);
                for (wi, (x, y)) in phi_cols[a].iter().zip(&psi_cols[b]).enumerate() {
                    let mut both = x & y;
                    while both != 0 {
                        let i = wi * 64 + both.trailing_zeros() as usize;
                        both &= both - 1;
                        for (s, t) in acc.iter_mut().zip(&wcols[i]) {
                            *s ^= t;
                        }
                    }
                }
                let target = pack(&mut self.algebra.basis_product(a, b).iter().copied(), d);
                if acc != target {
                    return Verdict::Fails(a, b);
                }
            }
        }
        Verdict::Verified
    }

    /// `Ok(())` if verified, otherwise an error naming the failing pair.
    pub fn check(&self) -> Result<()> {
        match self.verify() {
            Verdict::Verified => Ok(()),
            Verdict::Fails(a, b) => Err(Error::Internal(format!("algorithm fails on basis pair ({a}, {b})"))),
        }
    }

    /// Returns a copy with term order permuted: output term `k` is input term `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Dimension("not a permutation of the terms".into()));
        }
        let rows = |m: &Matrix| Matrix::from_rows_with_cols(&perm.iter().map(|&p| m.row(p).to_vec()).collect::<Vec<_>>(), m.cols());
        let w = Matrix::from_cols(&perm.iter().map(|&p| self.w.col(p)).collect::<Vec<_>>(), self.dim());
        Self::new(self.algebra.clone(), rows(&self.phi), rows(&self.psi), w, self.symmetric)
    }
}
