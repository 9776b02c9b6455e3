//! Extension fields `F[z]/(M(z))`, canonical moduli, the field tower over a
//! base `F_q`, root finding and embeddings between canonical extensions.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::One;

use super::fq::{Field, Fq};
use super::matrix::Matrix;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

struct ExtInner<F: Field> {
    base: F,
    /// Monic, little-endian, length `degree + 1`.
    modulus: Vec<F::Elem>,
    /// Nonzero non-leading terms of the modulus, for fast reduction.
    sparse: Vec<(usize, F::Elem)>,
    degree: usize,
}

/// The field `F[z]/(M)` for an irreducible monic `M` over `F`.
/// Elements are coefficient vectors of fixed length `deg M`.
pub struct ExtField<F: Field>(Arc<ExtInner<F>>);

impl<F: Field> Clone for ExtField<F> {
    fn clone(&self) -> Self {
        ExtField(self.0.clone())
    }
}

impl<F: Field> fmt::Debug for ExtField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[z]/({:?})", self.0.base, self.0.modulus)
    }
}

impl<F: Field> PartialEq for ExtField<F>
where
    F: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base && self.0.modulus == other.0.modulus
    }
}

impl<F: Field> ExtField<F> {
    /// Builds `F[z]/(modulus)`. The modulus is made monic; irreducibility is
    /// checked.
    pub fn new(base: F, modulus: Poly<F>) -> Result<Self> {
        let modulus = poly::monic(&base, &poly::trim(&base, modulus));
        if modulus.len() < 2 || !is_irreducible(&base, &modulus) {
            return Err(Error::Reducible);
        }
        Ok(Self::new_unchecked(base, modulus))
    }

    pub(crate) fn new_unchecked(base: F, modulus: Poly<F>) -> Self {
        let degree = modulus.len() - 1;
        let sparse = modulus[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !base.is_zero(c))
            .map(|(i, c)| (i, c.clone()))
            .collect();
        ExtField(Arc::new(ExtInner { base, modulus, sparse, degree }))
    }

    pub fn base(&self) -> &F {
        &self.0.base
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn modulus(&self) -> &[F::Elem] {
        &self.0.modulus
    }

    /// Embeds a base-field constant.
    pub fn from_base(&self, c: F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.0.base.zero(); self.degree()];
        v[0] = c;
        v
    }

    /// The class of `z`.
    pub fn gen(&self) -> Vec<F::Elem> {
        if self.degree() == 1 {
            // z = -M(0) when M = z + c
            return self.from_base(self.0.base.neg(&self.0.modulus[0]));
        }
        let mut v = vec![self.0.base.zero(); self.degree()];
        v[1] = self.0.base.one();
        v
    }

    /// Reduces an arbitrary polynomial in `z`.
    pub fn from_poly(&self, p: &[F::Elem]) -> Vec<F::Elem> {
        let b = &self.0.base;
        let mut r = poly::rem(b, p, &self.0.modulus);
        r.resize(self.degree(), b.zero());
        r
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> Poly<F> {
        poly::trim(&self.0.base, a.to_vec())
    }

    /// Whether `a` lies in the base field.
    pub fn in_base(&self, a: &[F::Elem]) -> bool {
        a[1..].iter().all(|c| self.0.base.is_zero(c))
    }

    /// `a -> a^{|F|}`, the relative Frobenius.
    pub fn frobenius_base(&self, a: &Vec<F::Elem>) -> Vec<F::Elem> {
        self.pow_big(a, &self.0.base.order())
    }
}

impl<F: Field> Field for ExtField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.0.base.zero(); self.degree()]
    }

    fn one(&self) -> Self::Elem {
        self.from_base(self.0.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.0.base.is_zero(c))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.0.base.add(x, y)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.0.base.sub(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.0.base.neg(x)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.0.base;
        let m = self.degree();
        let mut prod = vec![f.zero(); 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !f.is_zero(y) {
                    prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
                }
            }
        }
        for k in (m..prod.len()).rev() {
            if f.is_zero(&prod[k]) {
                continue;
            }
            let c = prod[k].clone();
            for (i, mi) in &self.0.sparse {
                let idx = k - m + i;
                prod[idx] = f.sub(&prod[idx], &f.mul(&c, mi));
            }
        }
        prod.truncate(m);
        prod
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.to_poly(a);
        poly::invmod(&self.0.base, &p, &self.0.modulus).map(|r| self.from_poly(&r))
    }

    fn characteristic(&self) -> u32 {
        self.0.base.characteristic()
    }

    fn prime_degree(&self) -> u32 {
        self.0.base.prime_degree() * self.degree() as u32
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_base(self.0.base.from_int(n))
    }

    fn element_from_index(&self, mut k: u64) -> Self::Elem {
        let bsize = self.0.base.order_u64().unwrap_or(u64::MAX);
        (0..self.degree())
            .map(|_| {
                let c = self.0.base.element_from_index(k % bsize);
                k /= bsize;
                c
            })
            .collect()
    }
}

/// Number of monic irreducibles of degree `d` over `F_q` (saturating).
pub fn count_irreducibles(q: u32, d: u32) -> u128 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = mobius(e);
        if mu == 0 {
            continue;
        }
        let term = match (q as i128).checked_pow(d / e) {
            Some(t) => t,
            None => return u128::MAX,
        };
        total += mu as i128 * term;
    }
    (total / d as i128) as u128
}

pub(crate) fn mobius(mut n: u32) -> i32 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Irreducibility over `F` (Ben-Or, exits at the first nontrivial gcd).
pub fn is_irreducible<F: Field>(f: &F, m: &[F::Elem]) -> bool {
    let Some(d) = poly::degree::<F>(m) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if f.is_zero(&m[0]) {
        return false;
    }
    let m = poly::monic(f, m);
    let q = f.order();
    let x = poly::monomial(f, 1);
    let mut xp = poly::rem(f, &x, &m);
    for _ in 1..=d / 2 {
        xp = poly::powmod_big(f, &xp, &q, &m);
        let g = poly::gcd(f, &m, &poly::sub(f, &xp, &x));
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The first `count` monic irreducibles of degree `d` over `f`, ordered by
/// their coefficient sequence read as a base-`|f|` integer (lowest digit is
/// the constant term, element order as in [`Field::element_from_index`]).
pub fn irreducibles(f: &Fq, d: u32, count: usize) -> Result<Vec<Poly<Fq>>> {
    let available = count_irreducibles(f.q(), d);
    if count as u128 > available {
        return Err(Error::NotEnoughIrreducibles {
            degree: d,
            available: available.min(u64::MAX as u128) as u64,
            requested: count as u64,
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut it = MonicIter::new(f.q(), d as usize);
    while out.len() < count {
        let cand = it.next().expect("enumeration covers every monic polynomial");
        if is_irreducible(f, &cand) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Smallest monic irreducible of degree `d` over `f`.
pub fn smallest_irreducible(f: &Fq, d: u32) -> Poly<Fq> {
    irreducibles(f, d, 1).expect("irreducibles exist in every degree").remove(0)
}

/// Enumerates monic polynomials of a fixed degree over `F_q` in integer order.
struct MonicIter {
    q: u32,
    digits: Vec<u32>,
    done: bool,
}

impl MonicIter {
    fn new(q: u32, d: usize) -> Self {
        MonicIter { q, digits: vec![0; d], done: false }
    }
}

impl Iterator for MonicIter {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut out = self.digits.clone();
        out.push(1);
        // increment little-endian counter
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.q {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// The base field `F_q` together with its canonical extensions `F_{q^m}`,
/// each defined by the smallest monic irreducible of degree `m`.
#[derive(Clone)]
pub struct FieldTower {
    base: Fq,
    cache: Arc<Mutex<HashMap<u32, ExtField<Fq>>>>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({:?})", self.base)
    }
}

impl FieldTower {
    pub fn new(q: u32) -> Result<Self> {
        Ok(Self::over(Fq::new(q)?))
    }

    pub fn over(base: Fq) -> Self {
        FieldTower { base, cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn base(&self) -> &Fq {
        &self.base
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// The canonical `F_{q^m}`.
    pub fn ext(&self, m: u32) -> ExtField<Fq> {
        if let Some(e) = self.cache.lock().unwrap().get(&m) {
            return e.clone();
        }
        let modulus = smallest_irreducible(&self.base, m);
        let e = ExtField::new_unchecked(self.base.clone(), modulus);
        self.cache.lock().unwrap().insert(m, e.clone());
        e
    }
}

/// All roots of `a` in `f`, sorted, without multiplicity.
pub fn roots<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let a = poly::monic(f, &poly::trim(f, a.to_vec()));
    if a.len() <= 1 {
        return Vec::new();
    }
    let x = poly::monomial(f, 1);
    let xq = poly::powmod_big(f, &x, &f.order(), &a);
    let g = poly::gcd(f, &a, &poly::sub(f, &xq, &x));
    let mut out = Vec::new();
    split_linear(f, &g, &mut out);
    out.sort();
    out
}

/// Splits a product of distinct linear factors (Cantor-Zassenhaus).
fn split_linear<F: Field>(f: &F, g: &[F::Elem], out: &mut Vec<F::Elem>) {
    match g.len() {
        0 | 1 => return,
        2 => {
            out.push(f.neg(&f.div(&g[0], &g[1]).unwrap()));
            return;
        }
        _ => {}
    }
    let order = f.order();
    let two = f.characteristic() == 2;
    let k = f.prime_degree() as usize;
    let mut idx = 1u64;
    loop {
        let c = f.element_from_index(idx);
        idx += 1;
        if f.is_zero(&c) {
            continue;
        }
        let h = if two {
            // absolute trace of c x
            let cx = poly::scale(f, &poly::monomial(f, 1), &c);
            let mut term = poly::rem(f, &cx, g);
            let mut acc = term.clone();
            for _ in 1..k {
                term = poly::mulmod(f, &term, &term, g);
                acc = poly::add(f, &acc, &term);
            }
            acc
        } else {
            let shifted = vec![c.clone(), f.one()];
            let e = (&order - BigUint::one()) >> 1;
            let pw = poly::powmod_big(f, &shifted, &e, g);
            poly::sub(f, &pw, &poly::constant(f, f.one()))
        };
        let d = poly::gcd(f, g, &h);
        if d.len() > 1 && d.len() < g.len() {
            let (other, r) = poly::divrem(f, g, &d);
            debug_assert!(r.is_empty());
            split_linear(f, &d, out);
            split_linear(f, &poly::monic(f, &other), out);
            return;
        }
        assert!(
            idx < 1 << 20 || BigUint::from(idx) < order,
            "root splitting failed to make progress"
        );
    }
}

/// Square root in any finite field (Tonelli-Shanks; Frobenius inverse in
/// characteristic 2).
pub fn sqrt<F: Field>(f: &F, a: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let order = f.order();
    if f.characteristic() == 2 {
        return Some(f.pow_big(a, &(&order >> 1)));
    }
    let one = BigUint::one();
    let qm1 = &order - &one;
    if f.pow_big(a, &(&qm1 >> 1)) != f.one() {
        return None;
    }
    let mut s = 0u64;
    let mut t = qm1.clone();
    while !t.bit(0) {
        t >>= 1;
        s += 1;
    }
    let minus_one = f.neg(&f.one());
    let mut idx = 2u64;
    let z = loop {
        let c = f.element_from_index(idx);
        idx += 1;
        if !f.is_zero(&c) && f.pow_big(&c, &(&qm1 >> 1)) == minus_one {
            break c;
        }
    };
    let mut m = s;
    let mut c = f.pow_big(&z, &t);
    let mut tt = f.pow_big(a, &t);
    let mut r = f.pow_big(a, &((&t + &one) >> 1));
    while tt != f.one() {
        let mut i = 0;
        let mut t2 = tt.clone();
        while t2 != f.one() {
            t2 = f.square(&t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.square(&b);
        }
        m = i;
        c = f.square(&b);
        tt = f.mul(&tt, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

impl ExtField<Fq> {
    /// Prime-field coordinates (each base coefficient expanded into its digits).
    pub fn prime_coords(&self, a: &[u32]) -> Vec<u32> {
        a.iter().flat_map(|&c| self.base().digits(c)).collect()
    }

    pub fn from_prime_coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.base().r() as usize;
        v.chunks(r).map(|ch| self.base().from_digits(ch)).collect()
    }

    /// Absolute trace to the prime field.
    pub fn abs_trace(&self, a: &Vec<u32>) -> u32 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.prime_degree() {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(self.in_base(&acc));
        let t = acc[0];
        debug_assert!(t < self.base().p());
        t
    }
}

/// Solves `y^2 + y = c` in characteristic 2. A solution exists iff the
/// absolute trace of `c` vanishes; the other solution is `y + 1`.
pub fn artin_schreier_solve(ext: &ExtField<Fq>, c: &Vec<u32>) -> Result<Option<Vec<u32>>> {
    if ext.characteristic() != 2 {
        return Err(Error::Precondition("Artin-Schreier equation needs characteristic 2".into()));
    }
    let k = ext.prime_degree();
    let check = |y: &Vec<u32>| ext.add(&ext.square(y), y) == *c;
    if k % 2 == 1 {
        // half-trace
        let mut y = c.clone();
        let mut term = c.clone();
        for _ in 0..(k - 1) / 2 {
            term = ext.square(&ext.square(&term));
            y = ext.add(&y, &term);
        }
        return Ok(check(&y).then_some(y));
    }
    // F_2-linear system for w -> w^2 + w
    let f2 = Fq::prime(2)?;
    let n = k as usize;
    let mut mat = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0u32; n];
        e[j] = 1;
        let w = ext.from_prime_coords(&e);
        let img = ext.prime_coords(&ext.add(&ext.square(&w), &w));
        for (i, v) in img.into_iter().enumerate() {
            mat.set(i, j, v);
        }
    }
    let rhs = ext.prime_coords(c);
    Ok(mat.solve(&f2, &rhs).map(|sol| ext.from_prime_coords(&sol)).filter(check))
}

/// An `F_q`-algebra embedding of the canonical `F_{q^d}` into the canonical
/// `F_{q^{de}}`, sending the generator to the smallest root of its modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: ExtField<Fq>,
    pub target: ExtField<Fq>,
    /// Images of `1, z, ..., z^{d-1}`.
    powers: Vec<Vec<u32>>,
}

impl Embedding {
    pub fn new(source: &ExtField<Fq>, target: &ExtField<Fq>) -> Result<Self> {
        let (d, n) = (source.degree() as u32, target.degree() as u32);
        if n % d != 0 || source.base() != target.base() {
            return Err(Error::DegreeMismatch { sub: d, ext: n });
        }
        let lifted: Poly<ExtField<Fq>> =
            source.modulus().iter().map(|&c| target.from_base(c)).collect();
        let rts = roots(target, &lifted);
        let root = rts.into_iter().next().ok_or(Error::Internal("modulus has no root".into()))?;
        let mut powers = Vec::with_capacity(d as usize);
        let mut cur = target.one();
        for _ in 0..d {
            powers.push(cur.clone());
            cur = target.mul(&cur, &root);
        }
        Ok(Embedding { source: source.clone(), target: target.clone(), powers })
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        let t = &self.target;
        let mut acc = t.zero();
        for (c, pw) in x.iter().zip(&self.powers) {
            if *c != 0 {
                let scaled: Vec<u32> = pw.iter().map(|v| t.base().mulu(*v, *c)).collect();
                acc = t.add(&acc, &scaled);
            }
        }
        acc
    }
}

/// Embeds `x` of the canonical `F_{q^d}` into the canonical `F_{q^{de}}`.
pub fn gf_embed(x: &[u32], source: &ExtField<Fq>, target: &ExtField<Fq>) -> Result<Vec<u32>> {
    Ok(Embedding::new(source, target)?.apply(x))
}

/// `q^n` as a big integer.
pub fn big_pow(q: u32, n: u32) -> BigUint {
    BigUint::from(q).pow(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_examples() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(irreducibles(&f2, 1, 2).unwrap(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(irreducibles(&f2, 2, 1).unwrap(), vec![vec![1, 1, 1]]);
        assert_eq!(count_irreducibles(2, 8), 30);
        assert_eq!(irreducibles(&f2, 8, 25).unwrap().len(), 25);
        assert!(irreducibles(&f2, 8, 31).is_err());
    }

    #[test]
    fn irreducibles_have_no_small_roots() {
        let f3 = Fq::new(3).unwrap();
        for p in irreducibles(&f3, 4, 10).unwrap() {
            for e in [1u32, 2] {
                let ext = FieldTower::over(f3.clone()).ext(e);
                let lifted: Vec<Vec<u32>> = p.iter().map(|&c| ext.from_base(c)).collect();
                assert!(roots(&ext, &lifted).is_empty());
            }
        }
    }

    #[test]
    fn embed_f4_into_f16() {
        let tower = FieldTower::new(2).unwrap();
        let (f4, f16) = (tower.ext(2), tower.ext(4));
        let alpha = f4.gen();
        let img = gf_embed(&alpha, &f4, &f16).unwrap();
        // alpha^2 + alpha + 1 = 0 survives the embedding
        let val = f16.add(&f16.add(&f16.square(&img), &img), &f16.one());
        assert!(f16.is_zero(&val));
        assert_eq!(gf_embed(&f4.zero(), &f4, &f16).unwrap(), f16.zero());
        assert_eq!(gf_embed(&f4.one(), &f4, &f16).unwrap(), f16.one());
        assert!(Embedding::new(&tower.ext(3), &f16).is_err());
    }

    #[test]
    fn embedding_is_ring_morphism() {
        let tower = FieldTower::new(3).unwrap();
        let (a, b) = (tower.ext(2), tower.ext(4));
        let e = Embedding::new(&a, &b).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (x, y) = (a.element_from_index(i), a.element_from_index(j));
                assert_eq!(e.apply(&a.mul(&x, &y)), b.mul(&e.apply(&x), &e.apply(&y)));
                assert_eq!(e.apply(&a.add(&x, &y)), b.add(&e.apply(&x), &e.apply(&y)));
            }
        }
    }

    #[test]
    fn ext_field_exhaustive_fermat() {
        let tower = FieldTower::new(4).unwrap();
        let f = tower.ext(3);
        for i in 0..64 {
            let x = f.element_from_index(i);
            assert_eq!(f.pow_u64(&x, 64), x);
            if !f.is_zero(&x) {
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn sqrt_odd_and_even() {
        for (q, m) in [(3u32, 5u32), (5, 2), (2, 7), (4, 3), (7, 3)] {
            let f = FieldTower::new(q).unwrap().ext(m);
            for i in 0..50 {
                let x = f.element_from_index(i * 7 + 3);
                let sq = f.square(&x);
                let r = sqrt(&f, &sq).unwrap();
                assert_eq!(f.square(&r), sq);
            }
        }
    }

    #[test]
    fn artin_schreier_cases() {
        let tower = FieldTower::new(2).unwrap();
        for m in [4u32, 5, 8] {
            let f = tower.ext(m);
            assert_eq!(artin_schreier_solve(&f, &f.zero()).unwrap().map(|y| f.is_zero(&y) || y == f.one()), Some(true));
            for i in 0..(1u64 << m) {
                let c = f.element_from_index(i);
                let sol = artin_schreier_solve(&f, &c).unwrap();
                assert_eq!(sol.is_some(), f.abs_trace(&c) == 0);
            }
        }
        let f3 = FieldTower::new(3).unwrap().ext(2);
        assert!(artin_schreier_solve(&f3, &f3.one()).is_err());
    }
}
