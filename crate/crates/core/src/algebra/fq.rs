//! The [`Field`] abstraction and the table-driven small base field `F_q`.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest base field handled with full operation tables.
pub const MAX_TABLE_Q: u32 = 1024;

/// Exact arithmetic in a finite field.
///
/// Elements are plain values; the field object carries whatever context
/// (tables, modulus) the operations need.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// The characteristic `p`.
    fn characteristic(&self) -> u32;
    /// Degree of the field over its prime subfield.
    fn prime_degree(&self) -> u32;
    /// Image of an integer under the prime-field embedding.
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Deterministic enumeration of the elements; `k` is read as a base-`p`
    /// digit string over the prime-field coordinates. Wraps modulo the order.
    fn element_from_index(&self, k: u64) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.prime_degree())
    }

    /// Field order as `u64`, if it fits.
    fn order_u64(&self) -> Option<u64> {
        let p = self.characteristic() as u64;
        let mut acc: u64 = 1;
        for _ in 0..self.prime_degree() {
            acc = acc.checked_mul(p)?;
        }
        Some(acc)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// The Frobenius `a -> a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow_u64(a, self.characteristic() as u64)
    }

    fn sum<'a, I>(&self, it: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^r` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut t) = (0, q);
    while t % p == 0 {
        t /= p;
        r += 1;
    }
    (t == 1).then_some((p, r))
}

struct FqTables {
    p: u32,
    r: u32,
    q: u32,
    /// Defining polynomial of `F_q` over `F_p`, little-endian digits, monic of degree `r`.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// The finite field `F_q`, `q = p^r <= MAX_TABLE_Q`.
///
/// An element is the integer `c_0 + c_1 p + ... + c_{r-1} p^{r-1}` whose base-`p`
/// digits are its coordinates on `1, z, ..., z^{r-1}`, where `z` is a root of the
/// smallest monic irreducible of degree `r` over `F_p`.
#[derive(Clone)]
pub struct Fq(Arc<FqTables>);

impl Fq {
    pub fn new(q: u32) -> Result<Fq> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_TABLE_Q {
            return Err(Error::FieldTooLarge(q));
        }
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible_prime_field(p, r)
        };
        let digits = |mut a: u32| -> Vec<u32> {
            let mut d = vec![0; r as usize];
            for c in d.iter_mut() {
                *c = a % p;
                a /= p;
            }
            d
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let n = q as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        let dig: Vec<Vec<u32>> = (0..q).map(digits).collect();
        for a in 0..n {
            let da = &dig[a];
            neg[a] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u16;
            for b in 0..n {
                let db = &dig[b];
                let s: Vec<u32> = da.iter().zip(db).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = undigits(&s) as u16;
                // schoolbook product then reduction by the monic modulus
                let mut prod = vec![0u32; 2 * r as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (r as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(r as usize) {
                            let idx = k - r as usize + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[k] = 0;
                    }
                }
                mul[a * n + b] = undigits(&prod[..r as usize]) as u16;
            }
        }
        for a in 1..n {
            for b in 1..n {
                if mul[a * n + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        Ok(Fq(Arc::new(FqTables { p, r, q, modulus, add, mul, neg, inv })))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrimePower(p));
        }
        Fq::new(p)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.0.r
    }

    /// Defining polynomial over `F_p` (little-endian, monic).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Prime-field coordinates of `a`.
    pub fn digits(&self, mut a: u32) -> Vec<u32> {
        let p = self.p();
        (0..self.r())
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        let p = self.p();
        d.iter().rev().fold(0, |acc, &c| acc * p + c % p)
    }

    /// Generator `z` of `F_q` over `F_p` (equals `p` as an index when `r > 1`).
    pub fn generator(&self) -> u32 {
        if self.r() == 1 {
            // any primitive element works for F_p; only used as a basis vector
            1
        } else {
            self.p()
        }
    }

    #[inline]
    pub fn addu(&self, a: u32, b: u32) -> u32 {
        self.0.add[(a * self.0.q + b) as usize] as u32
    }

    #[inline]
    pub fn mulu(&self, a: u32, b: u32) -> u32 {
        self.0.mul[(a * self.0.q + b) as usize] as u32
    }

    #[inline]
    pub fn negu(&self, a: u32) -> u32 {
        self.0.neg[a as usize] as u32
    }

    #[inline]
    pub fn subu(&self, a: u32, b: u32) -> u32 {
        self.addu(a, self.negu(b))
    }

    #[inline]
    pub fn invu(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.inv[a as usize] as u32)
    }

    /// Absolute trace to `F_p`.
    pub fn abs_trace(&self, a: u32) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.r() {
            t = self.addu(t, x);
            x = self.frobenius(&x);
        }
        t
    }

    /// Whether `a` is a square (zero counts as a square).
    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.p() == 2 {
            return true;
        }
        self.pow_u64(&a, ((self.q() - 1) / 2) as u64) == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q()
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.addu(*a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.subu(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.negu(*a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mulu(*a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        self.invu(*a)
    }
    fn characteristic(&self) -> u32 {
        self.p()
    }
    fn prime_degree(&self) -> u32 {
        self.r()
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }
    fn element_from_index(&self, k: u64) -> u32 {
        (k % self.q() as u64) as u32
    }
}

/// Smallest (as an integer in base `p`) monic irreducible of degree `r` over `F_p`,
/// found by trial division. Only used for the small tables above.
fn smallest_irreducible_prime_field(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for low in 0..count {
        let mut f = Vec::with_capacity(r as usize + 1);
        let mut t = low;
        for _ in 0..r {
            f.push((t % p as u64) as u32);
            t /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && !has_factor_up_to(&f, p, r / 2) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn has_factor_up_to(f: &[u32], p: u32, max_deg: u32) -> bool {
    for d in 1..=max_deg {
        for low in 0..(p as u64).pow(d) {
            let mut g = Vec::with_capacity(d as usize + 1);
            let mut t = low;
            for _ in 0..d {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if rem_mod_p(f, &g, p).iter().all(|&c| c == 0) {
                return true;
            }
        }
    }
    false
}

fn rem_mod_p(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * gi) % p;
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f8_uses_x3_x_1() {
        let f = Fq::new(8).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        // z^3 = z + 1
        let z = f.generator();
        assert_eq!(f.pow_u64(&z, 3), f.addu(z, 1));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = Fq::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow_u64(&a, q as u64), a);
                if a != 0 {
                    assert_eq!(f.mulu(a, f.invu(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.mulu(a, b), f.mulu(b, a));
                    let lhs = f.frobenius(&f.addu(a, b));
                    assert_eq!(lhs, f.addu(f.frobenius(&a), f.frobenius(&b)));
                }
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Fq::new(6).is_err());
        assert!(Fq::new(1).is_err());
        assert!(Fq::new(2048).is_err());
    }
}
