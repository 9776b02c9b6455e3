//! The truncated algebras `A_q(m,l) = F_{q^m}[t]/(t^l)`.

use super::ext::{ExtField, FieldTower};
use super::fq::Field;
use super::structure::StructureAlgebra;
use crate::error::{Error, Result};

/// `A_q(m,l)`, viewed as an `F_q`-vector space of dimension `m l` with basis
/// `z^j t^k` at index `k m + j` (`z` the canonical generator of `F_{q^m}`).
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    field: ExtField<super::fq::Fq>,
    m: usize,
    l: usize,
}

/// An element: `l` coefficients in `F_{q^m}`, lowest power of `t` first.
pub type TruncElem = Vec<Vec<u32>>;

impl TruncatedAlgebra {
    pub fn new(tower: &FieldTower, m: u32, l: u32) -> Result<Self> {
        if m == 0 || l == 0 {
            return Err(Error::Precondition("A_q(m,l) needs m, l >= 1".into()));
        }
        Ok(TruncatedAlgebra { field: tower.ext(m), m: m as usize, l: l as usize })
    }

    pub fn field(&self) -> &ExtField<super::fq::Fq> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.base().q()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.m * self.l
    }

    pub fn zero(&self) -> TruncElem {
        vec![self.field.zero(); self.l]
    }

    pub fn one(&self) -> TruncElem {
        let mut v = self.zero();
        v[0] = self.field.one();
        v
    }

    /// The element `t`.
    pub fn t(&self) -> TruncElem {
        let mut v = self.zero();
        if self.l > 1 {
            v[1] = self.field.one();
        }
        v
    }

    pub fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.l - i) {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        out
    }

    /// Coordinates on the `F_q`-basis.
    pub fn to_flat(&self, a: &TruncElem) -> Vec<u32> {
        a.iter().flat_map(|c| c.iter().copied()).collect()
    }

    pub fn from_flat(&self, v: &[u32]) -> TruncElem {
        assert_eq!(v.len(), self.dim(), "flat vector length");
        v.chunks(self.m).map(|c| c.to_vec()).collect()
    }

    /// Structure constants on the basis `z^j t^k`.
    pub fn structure(&self) -> StructureAlgebra {
        let d = self.dim();
        let basis: Vec<TruncElem> = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                self.from_flat(&e)
            })
            .collect();
        let mut c = Vec::with_capacity(d * d * d);
        for x in &basis {
            for y in &basis {
                c.extend(self.to_flat(&self.mul(x, y)));
            }
        }
        let mut unity = vec![0; d];
        unity[0] = 1;
        StructureAlgebra::new(self.field.base().clone(), d, c, Some(unity))
            .expect("truncated algebra constants are consistent")
            .with_field_hint(self.l == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly;

    #[test]
    fn t_is_nilpotent() {
        let tower = FieldTower::new(3).unwrap();
        let a = TruncatedAlgebra::new(&tower, 2, 3).unwrap();
        let t = a.t();
        assert_eq!(a.mul(&a.mul(&t, &t), &t), a.zero());
        assert_ne!(a.mul(&t, &t), a.zero());
        assert_eq!(a.dim(), 6);
        assert!(a.structure().is_commutative());
    }

    #[test]
    fn m1_matches_polynomial_truncation_exhaustively() {
        let tower = FieldTower::new(2).unwrap();
        let f = tower.base().clone();
        for l in 1..=8u32 {
            let a = TruncatedAlgebra::new(&tower, 1, l).unwrap();
            let s = a.structure();
            let n = 1u64 << l;
            let step = if l > 5 { 7 } else { 1 };
            for x in (0..n).step_by(step) {
                for y in (0..n).step_by(step) {
                    let (vx, vy) = (s.index_to_vec(x), s.index_to_vec(y));
                    let mut prod = poly::mul(&f, &vx, &vy);
                    prod.resize(2 * l as usize, 0);
                    prod.truncate(l as usize);
                    assert_eq!(s.mul(&vx, &vy), prod);
                }
            }
        }
    }
}
