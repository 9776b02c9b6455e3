//! Hensel lifting and the identification `F_q[x]/(Q^l) = A_q(deg Q, l)`.

use super::ext::{roots, ExtField, FieldTower};
use super::fq::Fq;
use super::matrix::Matrix;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// The algebra isomorphism `A_q(m,l) -> F_q[x]/(Q^l)`, `z -> alpha`, `t -> Q`,
/// where `alpha` lifts a root of the canonical modulus of `F_{q^m}`.
#[derive(Clone, Debug)]
pub struct HenselLift {
    base: Fq,
    m: usize,
    l: usize,
    q_poly: Poly<Fq>,
    /// `Q^l`.
    modulus: Poly<Fq>,
    /// The lifted root, reduced mod `Q^l`.
    alpha: Poly<Fq>,
    /// Inverse of the matrix of the isomorphism (polynomial coefficients ->
    /// truncated-algebra coordinates).
    to_trunc: Matrix,
}

/// Lifts the canonical generator of `F_{q^m}` (`m = deg Q`) to a root of its
/// minimal polynomial modulo `Q^l`.
pub fn hensel_lift(tower: &FieldTower, q_poly: &[u32], l: u32) -> Result<HenselLift> {
    let f = tower.base().clone();
    let residue = ExtField::new(f.clone(), q_poly.to_vec())?;
    let q_poly = residue.modulus().to_vec();
    let m = residue.degree();
    let l = l.max(1) as usize;
    let canon = tower.ext(m as u32);
    let min_poly: Vec<Vec<u32>> = canon.modulus().iter().map(|&c| residue.from_base(c)).collect();
    // same modulus: the identity, otherwise the smallest root
    let root = if residue.modulus() == canon.modulus() {
        residue.gen()
    } else {
        roots(&residue, &min_poly)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("minimal polynomial has no root in the residue field".into()))?
    };
    let modulus = poly::pow(&f, &q_poly, l as u64);
    let fpoly = canon.modulus().to_vec();
    let fder = poly::derivative(&f, &fpoly);
    let mut alpha = residue.to_poly(&root);
    // Newton iteration; precision doubles each step
    let mut prec = 1;
    while prec < l {
        prec = (2 * prec).min(l);
        let md = poly::pow(&f, &q_poly, prec as u64);
        let val = poly::rem(&f, &poly::compose(&f, &fpoly, &alpha), &md);
        let der = poly::rem(&f, &poly::compose(&f, &fder, &alpha), &md);
        let der_inv = poly::invmod(&f, &der, &md)
            .ok_or_else(|| Error::Internal("minimal polynomial is inseparable".into()))?;
        alpha = poly::sub(&f, &alpha, &poly::mulmod(&f, &val, &der_inv, &md));
    }
    alpha = poly::rem(&f, &alpha, &modulus);
    debug_assert!(poly::rem(&f, &poly::compose(&f, &fpoly, &alpha), &modulus).is_empty());

    let dim = m * l;
    let mut cols = Vec::with_capacity(dim);
    let mut qk = poly::constant(&f, 1);
    for _ in 0..l {
        let mut cur = qk.clone();
        for _ in 0..m {
            let mut c = cur.clone();
            c.resize(dim, 0);
            cols.push(c);
            cur = poly::mulmod(&f, &cur, &alpha, &modulus);
        }
        qk = poly::mulmod(&f, &qk, &q_poly, &modulus);
    }
    let forward = Matrix::from_cols(&cols, dim);
    let to_trunc = forward
        .left_inverse(&f)
        .map_err(|_| Error::Internal("Hensel basis is not a basis".into()))?;
    Ok(HenselLift { base: f, m, l, q_poly, modulus, alpha, to_trunc })
}

impl HenselLift {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn q_poly(&self) -> &[u32] {
        &self.q_poly
    }

    /// `Q^l`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The lifted generator.
    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// The morphism `F_{q^m} -> F_q[x]/(Q^l)`.
    pub fn apply(&self, x: &[u32]) -> Poly<Fq> {
        let f = &self.base;
        let mut acc = Vec::new();
        for c in x.iter().rev() {
            acc = poly::add(f, &poly::mulmod(f, &acc, &self.alpha, &self.modulus), &poly::constant(f, *c));
        }
        acc
    }

    /// Coordinates in `A_q(m,l)` (basis `z^j t^k` at `k m + j`) of a
    /// polynomial taken modulo `Q^l`.
    pub fn to_truncated(&self, g: &[u32]) -> Vec<u32> {
        let mut c = poly::rem(&self.base, g, &self.modulus);
        c.resize(self.m * self.l, 0);
        self.to_trunc.mul_vec(&self.base, &c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated::TruncatedAlgebra;

    #[test]
    fn l1_is_identity_on_residue_field() {
        let tower = FieldTower::new(2).unwrap();
        let q = tower.ext(3).modulus().to_vec();
        let h = hensel_lift(&tower, &q, 1).unwrap();
        // same modulus as the canonical field, so alpha = x
        assert_eq!(h.alpha(), &[0, 1]);
        for i in 0..8u32 {
            let v = vec![i & 1, (i >> 1) & 1, (i >> 2) & 1];
            assert_eq!(h.to_truncated(&h.apply(&v)), v);
        }
    }

    #[test]
    fn lift_of_x2_x_1_squared() {
        let tower = FieldTower::new(2).unwrap();
        let f = tower.base().clone();
        let h = hensel_lift(&tower, &[1, 1, 1], 2).unwrap();
        let a = h.alpha().to_vec();
        let val = poly::add(&f, &poly::add(&f, &poly::mul(&f, &a, &a), &a), &[1]);
        assert!(poly::rem(&f, &val, h.modulus()).is_empty());
    }

    #[test]
    fn composed_iso_is_multiplicative_on_a2_2_2() {
        let tower = FieldTower::new(2).unwrap();
        let f = tower.base().clone();
        let alg = TruncatedAlgebra::new(&tower, 2, 2).unwrap();
        let s = alg.structure();
        let h = hensel_lift(&tower, &[1, 1, 1], 2).unwrap();
        for x in 0..16u32 {
            for y in 0..16u32 {
                let px: Vec<u32> = (0..4).map(|i| (x >> i) & 1).collect();
                let py: Vec<u32> = (0..4).map(|i| (y >> i) & 1).collect();
                let prod = poly::mulmod(&f, &poly::trim(&f, px.clone()), &poly::trim(&f, py.clone()), h.modulus());
                assert_eq!(h.to_truncated(&prod), s.mul(&h.to_truncated(&px), &h.to_truncated(&py)));
            }
        }
    }

    #[test]
    fn reducible_rejected() {
        let tower = FieldTower::new(2).unwrap();
        assert_eq!(hensel_lift(&tower, &[1, 0, 1], 2).unwrap_err(), Error::Reducible);
    }
}
