//! Dense univariate polynomials over any [`Field`], as little-endian
//! coefficient vectors with no trailing zeros (the zero polynomial is empty).

use num_bigint::BigUint;

use super::fq::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F>) -> Poly<F> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: Field>(a: &[F::Elem]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F> {
    trim(f, vec![c])
}

/// The monomial `x^k`.
pub fn monomial<F: Field>(f: &F, k: usize) -> Poly<F> {
    let mut v = vec![f.zero(); k + 1];
    v[k] = f.one();
    v
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn pow<F: Field>(f: &F, a: &[F::Elem], mut e: u64) -> Poly<F> {
    let mut acc = constant(f, f.one());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(f, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(f, &base, &base);
        }
    }
    acc
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    let db = degree::<F>(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(&r[top], &lead_inv);
        let shift = top - db;
        if !f.is_zero(&c) {
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bi));
            }
        }
        q[shift] = c;
        r.pop();
    }
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    divrem(f, a, b).1
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F> {
    rem(f, &mul(f, a, b), m)
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, &f.inv(l).unwrap()),
    }
}

/// Monic gcd.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn xgcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (constant(f, f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(l) => {
            let li = f.inv(l).unwrap();
            (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
        }
    }
}

/// Inverse of `a` modulo `m`, if coprime.
pub fn invmod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Poly<F>> {
    let (g, s, _) = xgcd(f, &rem(f, a, m), m);
    (g.len() == 1).then(|| rem(f, &s, m))
}

pub fn powmod_big<F: Field>(f: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Poly<F> {
    let base = rem(f, a, m);
    let mut acc = rem(f, &constant(f, f.one()), m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    acc
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Poly<F> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
        .collect();
    trim(f, out)
}

/// Composition `a(b(x))`.
pub fn compose<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    a.iter().rev().fold(Vec::new(), |acc, c| add(f, &mul(f, &acc, b), &constant(f, c.clone())))
}

/// Maps coefficients through a ring morphism into another field.
pub fn map_coeffs<F: Field, G: Field>(g: &G, a: &[F::Elem], phi: impl Fn(&F::Elem) -> G::Elem) -> Poly<G> {
    trim(g, a.iter().map(phi).collect())
}

/// Exact `v_m(a)`: largest `k` with `m^k | a` (a nonzero).
pub fn multiplicity<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> (usize, Poly<F>) {
    let mut k = 0;
    let mut cur = a.to_vec();
    loop {
        let (q, r) = divrem(f, &cur, m);
        if !r.is_empty() || cur.is_empty() {
            return (k, cur);
        }
        cur = q;
        k += 1;
    }
}
