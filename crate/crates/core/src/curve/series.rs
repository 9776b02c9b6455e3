//! Truncated Laurent series with explicit absolute precision.

use crate::algebra::poly::Poly;
use crate::algebra::Field;

/// Absolute precision of an exact series.
pub(crate) const EXACT: i64 = i64::MAX / 4;

/// `sum c[i] t^(v+i) + O(t^prec)`; coefficients past `c` and below `prec`
/// are zero.
#[derive(Clone, Debug)]
pub(crate) struct Laurent<F: Field> {
    pub v: i64,
    pub c: Vec<F::Elem>,
    pub prec: i64,
}

impl<F: Field> Laurent<F> {
    pub fn zero() -> Self {
        Laurent { v: 0, c: Vec::new(), prec: EXACT }
    }

    pub fn constant(c: F::Elem) -> Self {
        Laurent { v: 0, c: vec![c], prec: EXACT }
    }

    /// An exact polynomial in `t`.
    pub fn from_poly(p: Poly<F>) -> Self {
        Laurent { v: 0, c: p, prec: EXACT }
    }

    pub fn with_prec(mut self, prec: i64) -> Self {
        self.prec = self.prec.min(prec);
        let keep = (self.prec - self.v).max(0) as usize;
        self.c.truncate(keep);
        self
    }

    /// Coefficient of `t^k`; `None` past the precision.
    pub fn coeff(&self, f: &F, k: i64) -> Option<F::Elem> {
        if k >= self.prec {
            return None;
        }
        if k < self.v {
            return Some(f.zero());
        }
        Some(self.c.get((k - self.v) as usize).cloned().unwrap_or_else(|| f.zero()))
    }

    pub fn add(&self, f: &F, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let v = self.v.min(o.v);
        let end = (self.v + self.c.len() as i64).max(o.v + o.c.len() as i64).min(prec);
        let c = (v..end)
            .map(|k| {
                let a = self.coeff(f, k).unwrap();
                let b = o.coeff(f, k).unwrap();
                f.add(&a, &b)
            })
            .collect();
        Laurent { v, c, prec }
    }

    pub fn neg(&self, f: &F) -> Self {
        Laurent { v: self.v, c: self.c.iter().map(|a| f.neg(a)).collect(), prec: self.prec }
    }

    pub fn sub(&self, f: &F, o: &Self) -> Self {
        self.add(f, &o.neg(f))
    }

    pub fn scale(&self, f: &F, s: &F::Elem) -> Self {
        Laurent { v: self.v, c: self.c.iter().map(|a| f.mul(a, s)).collect(), prec: self.prec }
    }

    pub fn mul(&self, f: &F, o: &Self) -> Self {
        let v = self.v + o.v;
        let prec = (self.v + o.prec).min(o.v + self.prec).min(EXACT);
        if self.c.is_empty() || o.c.is_empty() {
            return Laurent { v, c: Vec::new(), prec };
        }
        let len = ((self.c.len() + o.c.len() - 1) as i64).min(prec - v).max(0) as usize;
        let mut c = vec![f.zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if i >= len || f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(len - i) {
                if !f.is_zero(b) {
                    c[i + j] = f.add(&c[i + j], &f.mul(a, b));
                }
            }
        }
        Laurent { v, c, prec }
    }

    /// Strips leading zeros. Returns the valuation, or `None` when every
    /// known coefficient vanishes (`Some(EXACT)` for the exact zero).
    pub fn normalize(&mut self, f: &F) -> Option<i64> {
        let lead = self.c.iter().position(|a| !f.is_zero(a));
        match lead {
            Some(k) => {
                self.c.drain(..k);
                self.v += k as i64;
                Some(self.v)
            }
            None => {
                self.c.clear();
                self.v = self.prec.min(EXACT);
                (self.prec >= EXACT).then_some(EXACT)
            }
        }
    }

    /// Inverse of a normalized series with nonzero leading term, to at most
    /// `max_rel` relative terms.
    pub fn inv(&self, f: &F, max_rel: usize) -> Self {
        let rel = ((self.prec - self.v) as usize).min(max_rel);
        let c0 = f.inv(&self.c[0]).expect("normalized series");
        let mut out = vec![f.zero(); rel];
        for k in 0..rel {
            let mut s = if k == 0 { f.one() } else { f.zero() };
            for j in 1..=k.min(self.c.len().saturating_sub(1)) {
                s = f.sub(&s, &f.mul(&self.c[j], &out[k - j]));
            }
            out[k] = f.mul(&s, &c0);
        }
        Laurent { v: -self.v, c: out, prec: -self.v + rel as i64 }
    }

    /// `p(self)` for a polynomial with coefficients in `F`, by Horner, with
    /// intermediate results cut at absolute precision `cap`.
    pub fn compose(f: &F, p: &[F::Elem], x: &Self, cap: i64) -> Self {
        let mut acc = Self::zero();
        for a in p.iter().rev() {
            acc = acc.mul(f, x).add(f, &Self::constant(a.clone())).with_prec(cap);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fq;

    #[test]
    fn geometric_series() {
        let f = Fq::new(3).unwrap();
        let one_minus_t = Laurent::<Fq>::from_poly(vec![1, 2]);
        let inv = one_minus_t.inv(&f, 5);
        assert_eq!(inv.c, vec![1; 5]);
        let prod = inv.mul(&f, &one_minus_t);
        assert_eq!(prod.prec, 5);
        assert_eq!(prod.c[..5], [1, 0, 0, 0, 0]);
    }

    #[test]
    fn precision_tracking() {
        let f = Fq::new(2).unwrap();
        let a = Laurent::<Fq> { v: -2, c: vec![1, 1], prec: 3 };
        let b = Laurent::<Fq> { v: 1, c: vec![1], prec: 4 };
        let p = a.mul(&f, &b);
        assert_eq!((p.v, p.prec), (-1, 2));
        let mut z = Laurent::<Fq> { v: 0, c: vec![0, 0], prec: 2 };
        assert_eq!(z.normalize(&f), None);
    }
}
