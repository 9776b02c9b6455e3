//! Exact tensor rank for tiny algebras, the elementary lower bounds, and the
//! codes attached to an algorithm.

use crate::algebra::{Field, Fq, Matrix, StructureAlgebra};
use crate::error::{Error, Result};

use super::algorithm::BilinearAlgorithm;

/// Result of a bounded rank search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankResult {
    Exact(usize),
    ExceedsCap(usize),
}

/// Work budget for [`brute_force_rank`], counted in candidate elements examined.
pub const RANK_BUDGET: u64 = 200_000_000;

/// Minimal number of (symmetric, if `sym`) elementary tensors summing to the
/// multiplication tensor, searched up to `cap`.
///
/// The rank is the least `n` such that some `n`-dimensional space of
/// matrices containing the slices `S = span(T_k)` is spanned by rank-one
/// matrices (symmetric ones for the symmetric rank). The search runs over
/// all such spaces `V` containing `S`, enumerated as subspaces of the
/// quotient by `S` in reduced echelon form.
pub fn brute_force_rank(a: &StructureAlgebra, cap: usize, sym: bool) -> Result<RankResult> {
    Ok(match search(a, cap, sym, RANK_BUDGET)? {
        Some(found) => RankResult::Exact(found.rank),
        None => RankResult::ExceedsCap(cap),
    })
}

/// Like [`brute_force_rank`], but returns an optimal algorithm.
pub fn brute_force_witness(a: &StructureAlgebra, cap: usize, sym: bool) -> Result<Option<BilinearAlgorithm>> {
    brute_force_witness_within(a, cap, sym, RANK_BUDGET)
}

/// [`brute_force_witness`] with an explicit work budget.
pub fn brute_force_witness_within(
    a: &StructureAlgebra,
    cap: usize,
    sym: bool,
    budget: u64,
) -> Result<Option<BilinearAlgorithm>> {
    let Some(found) = search(a, cap, sym, budget)? else { return Ok(None) };
    let f = a.base();
    let d = a.dim();
    let n = found.rank;
    let mut phi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    let mut scale = Vec::with_capacity(n);
    for v in &found.ones {
        let mut m = Matrix::zeros(d, d);
        for (&(i, j), &x) in found.coords.iter().zip(v) {
            m.set(i, j, x);
            if sym {
                m.set(j, i, x);
            }
        }
        let r0 = (0..d).find(|&i| m.row(i).iter().any(|&x| x != 0)).expect("rank one");
        let row = m.row(r0).to_vec();
        let j0 = row.iter().position(|&x| x != 0).unwrap();
        let inv = f.invu(row[j0]).unwrap();
        let u: Vec<u32> = (0..d).map(|i| f.mulu(m.get(i, j0), inv)).collect();
        if sym {
            // m = lambda u u^T with u[r0] = 1
            scale.push(row[r0]);
            phi.push(u.clone());
            psi.push(u);
        } else {
            scale.push(1);
            phi.push(u);
            psi.push(row);
        }
    }
    let ambient = Matrix::from_cols(&found.ones, found.coords.len());
    let mut w = Matrix::zeros(d, n);
    for k in 0..d {
        let slice: Vec<u32> = found.coords.iter().map(|&(i, j)| a.basis_product(i, j)[k]).collect();
        let c = ambient.solve(f, &slice).ok_or_else(|| Error::Internal("slice outside the rank-one span".into()))?;
        for i in 0..n {
            w.set(k, i, f.mulu(c[i], scale[i]));
        }
    }
    let phi = Matrix::from_rows_with_cols(&phi, d);
    let alg = if sym {
        BilinearAlgorithm::symmetric(a.clone(), phi, w)?
    } else {
        BilinearAlgorithm::new(a.clone(), phi, Matrix::from_rows_with_cols(&psi, d), w, false)?
    };
    alg.check()?;
    Ok(Some(alg))
}

struct Found {
    rank: usize,
    coords: Vec<(usize, usize)>,
    /// `rank` independent rank-one matrices, in ambient coordinates.
    ones: Vec<Vec<u32>>,
}

fn search(a: &StructureAlgebra, cap: usize, sym: bool, budget: u64) -> Result<Option<Found>> {
    let f = a.base();
    let q = f.q() as u64;
    let d = a.dim();
    if q.checked_pow(2 * d as u32).map_or(true, |v| v > 1 << 16) {
        return Err(Error::SearchTooLarge(format!("q^(2d) = {q}^{} exceeds 2^16", 2 * d)));
    }
    if sym && !a.is_commutative() {
        return Err(Error::NotCommutative);
    }
    // ambient coordinates: all (i, j), or i <= j for symmetric matrices
    let coords: Vec<(usize, usize)> = if sym {
        (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
    } else {
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect()
    };
    let amb = coords.len();
    let slices: Vec<Vec<u32>> = (0..d)
        .map(|k| coords.iter().map(|&(i, j)| a.basis_product(i, j)[k]).collect())
        .collect();
    let (s_rref, s_piv) = Matrix::from_rows_with_cols(&slices, amb).rref(f);
    let s_basis: Vec<Vec<u32>> = (0..s_piv.len()).map(|r| s_rref.row(r).to_vec()).collect();
    let s_dim = s_basis.len();
    if s_dim == 0 {
        return Ok(Some(Found { rank: 0, coords, ones: Vec::new() }));
    }
    let complement: Vec<usize> = (0..amb).filter(|c| !s_piv.contains(c)).collect();
    let is_rank_one = |v: &[u32]| -> bool {
        let mut m = Matrix::zeros(d, d);
        for (&(i, j), &x) in coords.iter().zip(v) {
            m.set(i, j, x);
            if sym {
                m.set(j, i, x);
            }
        }
        m.rank(f) == 1
    };
    let mut work = 0u64;
    for n in s_dim..=cap.min(amb) {
        let k = n - s_dim;
        let count = gaussian_binomial(q, complement.len(), k).saturating_mul(q.saturating_pow(n as u32));
        work = work.saturating_add(count);
        if work > budget {
            return Err(Error::SearchTooLarge(format!("rank search beyond {budget} candidates at n = {n}")));
        }
        let mut found: Option<Vec<Vec<u32>>> = None;
        for_each_subspace(f, complement.len(), k, &mut |rows| {
            let mut basis = s_basis.clone();
            for r in rows {
                let mut v = vec![0; amb];
                for (&c, &x) in complement.iter().zip(r) {
                    v[c] = x;
                }
                basis.push(v);
            }
            let mut ones: Vec<Vec<u32>> = Vec::new();
            let mut coeffs = vec![0u32; n];
            loop {
                let mut v = vec![0u32; amb];
                for (c, b) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = f.addu(*x, f.mulu(*c, y));
                        }
                    }
                }
                if is_rank_one(&v) {
                    ones.push(v);
                }
                if !increment(&mut coeffs, f.q()) {
                    break;
                }
            }
            if ones.len() >= n {
                let (_, piv) = Matrix::from_cols(&ones, amb).rref(f);
                if piv.len() == n {
                    found = Some(piv.iter().map(|&c| ones[c].clone()).collect());
                }
            }
            found.is_some()
        });
        if let Some(ones) = found {
            return Ok(Some(Found { rank: n, coords, ones }));
        }
    }
    Ok(None)
}

fn increment(v: &mut [u32], q: u32) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

fn gaussian_binomial(q: u64, n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul((q as u128).pow((n - i) as u32) - 1);
        den = den.saturating_mul((q as u128).pow((i + 1) as u32) - 1);
    }
    (num / den).min(u64::MAX as u128) as u64
}

/// Calls `visit` on a basis (as `k` rows of length `n`) of every
/// `k`-dimensional subspace of `F_q^n`; stops when `visit` returns true.
fn for_each_subspace(f: &Fq, n: usize, k: usize, visit: &mut dyn FnMut(&[Vec<u32>]) -> bool) -> bool {
    let mut pivots: Vec<usize> = (0..k).collect();
    if k > n {
        return false;
    }
    loop {
        // free positions: (row r, col c) with c > pivot_r, c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut vals = vec![0u32; free.len()];
        loop {
            let mut rows = vec![vec![0u32; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r][c] = v;
            }
            if visit(&rows) {
                return true;
            }
            if !increment(&mut vals, f.q()) {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The elementary lower bound on the bilinear complexity: `2 dim - 1` for a
/// field, `dim` for a unital algebra, 0 otherwise.
pub fn lower_bounds(a: &StructureAlgebra) -> usize {
    if a.unity().is_none() {
        return 0;
    }
    if a.is_field() {
        2 * a.dim() - 1
    } else {
        a.dim()
    }
}

/// Generator matrices (`dim x n`) of the codes `C_phi` and `C_psi`.
pub fn codes(alg: &BilinearAlgorithm) -> (Matrix, Matrix) {
    (alg.phi().transpose(), alg.psi().transpose())
}

/// Codeword enumeration limit for [`mutually_intersecting`].
pub const CODE_ENUM_LIMIT: u64 = 1 << 16;

/// Whether every nonzero codeword of `a` meets every nonzero codeword of `b`.
pub fn mutually_intersecting(f: &Fq, a: &Matrix, b: &Matrix) -> Result<bool> {
    let sa = supports(f, a)?;
    let sb = supports(f, b)?;
    Ok(sa.iter().all(|x| sb.iter().all(|y| x.iter().zip(y).any(|(u, v)| u & v != 0))))
}

/// Distinct supports of the nonzero codewords generated by the rows of `g`.
fn supports(f: &Fq, g: &Matrix) -> Result<Vec<Vec<u64>>> {
    let k = g.rows();
    let n = g.cols();
    let total = (f.q() as u64).checked_pow(k as u32).filter(|&t| t <= CODE_ENUM_LIMIT);
    if total.is_none() {
        return Err(Error::SearchTooLarge(format!("{}^{k} codewords", f.q())));
    }
    let mut out = std::collections::BTreeSet::new();
    let mut coeffs = vec![0u32; k];
    while increment(&mut coeffs, f.q()) {
        let mut word = vec![0u64; n.div_ceil(64).max(1)];
        let mut nonzero = false;
        for c in 0..n {
            let v = (0..k).fold(0, |acc, r| f.addu(acc, f.mulu(coeffs[r], g.get(r, c))));
            if v != 0 {
                word[c / 64] |= 1 << (c % 64);
                nonzero = true;
            }
        }
        if nonzero {
            out.insert(word);
        }
    }
    Ok(out.into_iter().collect())
}

/// A pair `(x, y)` in `F_4` with `x^2 y != x y^2`.
pub fn s3_counterexample_witness() -> (u32, u32) {
    let f4 = Fq::new(4).unwrap();
    for y in 0..4 {
        for x in 0..4 {
            if x != y && s3_differs(&f4, x, y) {
                return (x, y);
            }
        }
    }
    unreachable!("F_4 is not F_2")
}

pub fn s3_differs(f: &Fq, x: u32, y: u32) -> bool {
    f.mul(&f.square(&x), &y) != f.mul(&x, &f.square(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 3, 1), 7);
        assert_eq!(gaussian_binomial(3, 6, 2), 11011);
        let f = Fq::new(2).unwrap();
        let mut count = 0;
        for_each_subspace(&f, 4, 2, &mut |_| {
            count += 1;
            false
        });
        assert_eq!(count, gaussian_binomial(2, 4, 2));
    }
}
