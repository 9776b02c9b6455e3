//! Dense matrices over a table field `F_q`.

use std::fmt;

use super::fq::Fq;
use crate::error::{Error, Result};

/// A dense `rows x cols` matrix over `F_q`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Linear maps are represented by their matrices (acting on column vectors).
pub type LinearMap = Matrix;

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Matrix::from_rows`], but keeps the column count for empty input.
    pub fn from_rows_with_cols(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_cols(cols: &[Vec<u32>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Fq, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = i * out.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if b != 0 {
                        out.data[base + j] = f.addu(out.data[base + j], f.mulu(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, f: &Fq, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.addu(acc, f.mulu(a, b)) })
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols, data })
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Fq) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            m.swap_rows(r, p);
            let inv = f.invu(m.get(r, c)).unwrap();
            if inv != 1 {
                for j in c..m.cols {
                    let v = m.get(r, j);
                    m.set(r, j, f.mulu(v, inv));
                }
            }
            let pivot_row: Vec<u32> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let base = i * m.cols;
                for j in c..m.cols {
                    if pivot_row[j] != 0 {
                        m.data[base + j] = f.subu(m.data[base + j], f.mulu(factor, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Fq) -> usize {
        self.rref(f).1.len()
    }

    /// A basis of `{v : M v = 0}`.
    pub fn kernel_basis(&self, f: &Fq) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.negu(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, f: &Fq, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols);
        }
        Some(x)
    }

    /// `R` with `M R = I`; requires `M` surjective.
    pub fn right_inverse(&self, f: &Fq) -> Result<Matrix> {
        let rank = self.rank(f);
        if rank < self.rows {
            return Err(Error::NotSurjective { rank, target: self.rows });
        }
        let mut cols = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut e = vec![0; self.rows];
            e[i] = 1;
            cols.push(self.solve(f, &e).expect("full row rank"));
        }
        Ok(Matrix::from_cols(&cols, self.cols))
    }

    /// `L` with `L M = I`; requires `M` injective.
    pub fn left_inverse(&self, f: &Fq) -> Result<Matrix> {
        let rank = self.rank(f);
        if rank < self.cols {
            return Err(Error::NotInjective { rank, cols: self.cols });
        }
        Ok(self.transpose().right_inverse(f)?.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverts_to_identity() {
        let f = Fq::new(5).unwrap();
        let i = Matrix::identity(4);
        assert_eq!(i.right_inverse(&f).unwrap(), i);
        assert_eq!(i.left_inverse(&f).unwrap(), i);
        assert!(i.kernel_basis(&f).is_empty());
    }

    #[test]
    fn right_inverse_3x6_over_f2() {
        let f = Fq::new(2).unwrap();
        let m = Matrix::from_rows(&[
            vec![1, 0, 1, 1, 0, 0],
            vec![0, 1, 1, 0, 1, 0],
            vec![1, 1, 0, 0, 0, 1],
        ]);
        let r = m.right_inverse(&f).unwrap();
        assert_eq!((r.rows(), r.cols()), (6, 3));
        assert_eq!(m.mul(&f, &r).unwrap(), Matrix::identity(3));
        assert_eq!(m.kernel_basis(&f).len(), 3);
        for v in m.kernel_basis(&f) {
            assert!(m.mul_vec(&f, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_deficit_is_reported() {
        let f = Fq::new(3).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2, 0], vec![2, 1, 0]]);
        assert_eq!(m.right_inverse(&f), Err(Error::NotSurjective { rank: 1, target: 2 }));
        assert_eq!(m.transpose().left_inverse(&f), Err(Error::NotInjective { rank: 1, cols: 2 }));
    }

    #[test]
    fn left_inverse_contract() {
        let f = Fq::new(4).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2], vec![3, 1], vec![0, 2]]);
        let l = m.left_inverse(&f).unwrap();
        assert_eq!(l.mul(&f, &m).unwrap(), Matrix::identity(2));
    }
}
