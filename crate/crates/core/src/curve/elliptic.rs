//! Elliptic curves in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_q`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::series::{Laurent, EXACT};
use super::{ClosedPoint, Curve, Divisor};
use crate::algebra::ext::{mobius, sqrt};
use crate::algebra::poly::{self, Poly};
use crate::algebra::{artin_schreier_solve, ExtField, Field, FieldTower, Fq, Matrix};
use crate::error::{Error, Result};

type K = ExtField<Fq>;
type Elem = Vec<u32>;
type Series = Laurent<K>;
/// An affine point over some extension, or `None` for the point at infinity.
pub type GeomPoint = Option<(Elem, Elem)>;

/// Largest field enumerated point by point.
pub const ENUM_LIMIT: u64 = 1 << 16;

/// A closed point: the point at infinity, or the lexicographically smallest
/// representative of a Frobenius orbit, with coordinates in the canonical
/// `F_{q^degree}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EcPoint {
    Infinity,
    Finite { degree: u32, x: Elem, y: Elem },
}

impl ClosedPoint for EcPoint {
    fn degree(&self) -> u32 {
        match self {
            EcPoint::Infinity => 1,
            EcPoint::Finite { degree, .. } => *degree,
        }
    }
}

impl fmt::Debug for EcPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcPoint::Infinity => f.write_str("Pinf"),
            EcPoint::Finite { degree, x, .. } if *degree > 4 => write!(f, "P{degree}({:?}..)", &x[..4]),
            EcPoint::Finite { degree, x, y } => write!(f, "P{degree}({x:?},{y:?})"),
        }
    }
}

pub type EcDivisor = Divisor<EcPoint>;

/// `(a(x) + b(x) y) / c(x)` with `c` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcFunction {
    pub a: Poly<Fq>,
    pub b: Poly<Fq>,
    pub c: Poly<Fq>,
}

impl EcFunction {
    pub fn new(f: &Fq, a: Poly<Fq>, b: Poly<Fq>, c: Poly<Fq>) -> Result<Self> {
        let (a, b, c) = (poly::trim(f, a), poly::trim(f, b), poly::trim(f, c));
        if c.is_empty() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let g = poly::gcd(f, &poly::gcd(f, &a, &b), &c);
        let g = if g.is_empty() { c.clone() } else { g };
        let (mut a, _) = poly::divrem(f, &a, &g);
        let (mut b, _) = poly::divrem(f, &b, &g);
        let (mut c, _) = poly::divrem(f, &c, &g);
        let lead = f.invu(*c.last().unwrap()).unwrap();
        a = poly::scale(f, &a, &lead);
        b = poly::scale(f, &b, &lead);
        c = poly::scale(f, &c, &lead);
        Ok(EcFunction { a, b, c })
    }

    pub fn constant(c: u32) -> Self {
        EcFunction { a: if c == 0 { vec![] } else { vec![c] }, b: vec![], c: vec![1] }
    }

    pub fn x() -> Self {
        EcFunction { a: vec![0, 1], b: vec![], c: vec![1] }
    }

    pub fn y() -> Self {
        EcFunction { a: vec![], b: vec![1], c: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }
}

/// Local parameter data at a closed point: the expansions of `x` and `y`.
struct LocalParam {
    field: K,
    x: Series,
    y: Series,
}

#[derive(Default)]
struct Caches {
    points: HashMap<u32, Arc<Vec<EcPoint>>>,
    params: HashMap<(EcPoint, usize), Arc<LocalParam>>,
}

#[derive(Clone)]
pub struct EllipticCurve {
    tower: FieldTower,
    a: [u32; 5],
    trace: i64,
    cache: Arc<Mutex<Caches>>,
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.a;
        write!(f, "q={} a=[{a1},{a2},{a3},{a4},{a6}]", self.q())
    }
}

/// Weierstrass arithmetic over one extension field.
struct Weier<'a> {
    k: &'a K,
    a: [Elem; 5],
}

impl<'a> Weier<'a> {
    fn new(k: &'a K, a: &[u32; 5]) -> Self {
        Weier { k, a: a.map(|c| k.from_base(c)) }
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    fn rhs(&self, x: &Elem) -> Elem {
        let k = self.k;
        let t = k.add(&k.mul(&k.add(x, &self.a[1]), x), &self.a[3]);
        k.add(&k.mul(&t, x), &self.a[4])
    }

    /// `a1 x + a3`.
    fn h(&self, x: &Elem) -> Elem {
        self.k.add(&self.k.mul(&self.a[0], x), &self.a[2])
    }

    fn on_curve(&self, x: &Elem, y: &Elem) -> bool {
        let k = self.k;
        k.add(&k.mul(y, y), &k.mul(&self.h(x), y)) == self.rhs(x)
    }

    fn neg(&self, p: &GeomPoint) -> GeomPoint {
        let k = self.k;
        p.as_ref().map(|(x, y)| (x.clone(), k.neg(&k.add(y, &self.h(x)))))
    }

    fn add(&self, p: &GeomPoint, q: &GeomPoint) -> GeomPoint {
        let k = self.k;
        let [a1, a2, a3, a4, a6] = &self.a;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return q.clone(),
            (_, None) => return p.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let (lambda, nu) = if x1 == x2 {
            let den = k.add(&k.add(y1, y2), &self.h(x2));
            if k.is_zero(&den) {
                return None;
            }
            let x1sq = k.square(x1);
            let num = k.sub(
                &k.add(&k.add(&k.mul(&k.from_int(3), &x1sq), &k.mul(&k.from_int(2), &k.mul(a2, x1))), a4),
                &k.mul(a1, y1),
            );
            let numnu = k.sub(
                &k.add(&k.add(&k.neg(&k.mul(&x1sq, x1)), &k.mul(a4, x1)), &k.mul(&k.from_int(2), a6)),
                &k.mul(a3, y1),
            );
            let inv = k.inv(&den).unwrap();
            (k.mul(&num, &inv), k.mul(&numnu, &inv))
        } else {
            let inv = k.inv(&k.sub(x2, x1)).unwrap();
            let lambda = k.mul(&k.sub(y2, y1), &inv);
            let nu = k.mul(&k.sub(&k.mul(y1, x2), &k.mul(y2, x1)), &inv);
            (lambda, nu)
        };
        let x3 = k.sub(&k.sub(&k.sub(&k.add(&k.square(&lambda), &k.mul(a1, &lambda)), a2), x1), x2);
        let y3 = k.sub(&k.neg(&k.add(&k.mul(&k.add(&lambda, a1), &x3), &nu)), a3);
        Some((x3, y3))
    }

    fn smul(&self, n: i64, p: &GeomPoint) -> GeomPoint {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn frob(&self, p: &GeomPoint) -> GeomPoint {
        p.as_ref().map(|(x, y)| (self.k.frobenius_base(x), self.k.frobenius_base(y)))
    }

    /// All affine points, via lookup tables for the quadratic in `y`.
    fn affine_points(&self) -> Result<Vec<(Elem, Elem)>> {
        let k = self.k;
        let order = k.order_u64().filter(|&o| o <= ENUM_LIMIT).ok_or_else(|| {
            Error::SearchTooLarge(format!("enumerating F_{}^{}", k.base().q(), k.degree()))
        })?;
        let elems: Vec<Elem> = (0..order).map(|i| k.element_from_index(i)).collect();
        let mut out = Vec::new();
        if k.characteristic() == 2 {
            // z^2 + z -> z
            let table: HashMap<Elem, &Elem> = elems.iter().map(|z| (k.add(&k.square(z), z), z)).collect();
            let half = k.order() >> 1;
            for x in &elems {
                let h = self.h(x);
                let r = self.rhs(x);
                if k.is_zero(&h) {
                    out.push((x.clone(), k.pow_big(&r, &half)));
                    continue;
                }
                let c = k.mul(&r, &k.inv(&k.square(&h)).unwrap());
                if let Some(z) = table.get(&c) {
                    let y = k.mul(&h, z);
                    out.push((x.clone(), y.clone()));
                    out.push((x.clone(), k.add(&y, &h)));
                }
            }
        } else {
            let table: HashMap<Elem, &Elem> = elems.iter().map(|s| (k.square(s), s)).collect();
            let two_inv = k.inv(&k.from_int(2)).unwrap();
            for x in &elems {
                let h = self.h(x);
                let disc = k.add(&k.mul(&k.from_int(4), &self.rhs(x)), &k.square(&h));
                if let Some(s) = table.get(&disc) {
                    let y1 = k.mul(&k.sub(s, &h), &two_inv);
                    out.push((x.clone(), y1.clone()));
                    if !k.is_zero(s) {
                        out.push((x.clone(), k.mul(&k.sub(&k.neg(*s), &h), &two_inv)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Solutions `y` for a given `x`, by square roots or Artin-Schreier.
    fn solve_y(&self, x: &Elem) -> Result<Vec<Elem>> {
        let k = self.k;
        let h = self.h(x);
        let r = self.rhs(x);
        if k.characteristic() == 2 {
            if k.is_zero(&h) {
                return Ok(vec![sqrt(k, &r).unwrap()]);
            }
            let c = k.mul(&r, &k.inv(&k.square(&h)).unwrap());
            Ok(match artin_schreier_solve(k, &c)? {
                Some(z) => {
                    let y = k.mul(&h, &z);
                    vec![y.clone(), k.add(&y, &h)]
                }
                None => vec![],
            })
        } else {
            let disc = k.add(&k.mul(&k.from_int(4), &r), &k.square(&h));
            let two_inv = k.inv(&k.from_int(2)).unwrap();
            Ok(match sqrt(k, &disc) {
                Some(s) => {
                    let mut v = vec![k.mul(&k.sub(&s, &h), &two_inv)];
                    if !k.is_zero(&s) {
                        v.push(k.mul(&k.sub(&k.neg(&s), &h), &two_inv));
                    }
                    v
                }
                None => vec![],
            })
        }
    }
}

/// Orbit size of a geometric point over `F_q` (it divides the field degree).
fn orbit(w: &Weier, p: &GeomPoint) -> Vec<GeomPoint> {
    let mut out = vec![p.clone()];
    let mut cur = w.frob(p);
    while cur != *p {
        out.push(cur.clone());
        cur = w.frob(&cur);
    }
    out
}

impl EllipticCurve {
    pub fn new(q: u32, a: [u32; 5]) -> Result<Self> {
        Self::over(FieldTower::new(q)?, a)
    }

    pub fn over(tower: FieldTower, a: [u32; 5]) -> Result<Self> {
        let f = tower.base();
        if a.iter().any(|&c| c >= f.q()) {
            return Err(Error::Precondition("coefficient out of range".into()));
        }
        if f.is_zero(&discriminant(f, &a)) {
            return Err(Error::Singular);
        }
        let mut curve = EllipticCurve { tower, a, trace: 0, cache: Arc::new(Mutex::new(Caches::default())) };
        let n1 = curve.count_points_exhaustive(1)?;
        curve.trace = curve.q() as i64 + 1 - n1 as i64;
        Ok(curve)
    }

    pub fn coeffs(&self) -> [u32; 5] {
        self.a
    }

    pub fn base(&self) -> &Fq {
        self.tower.base()
    }

    pub fn trace(&self) -> i64 {
        self.trace
    }

    fn weier<'a>(&self, k: &'a K) -> Weier<'a> {
        Weier::new(k, &self.a)
    }

    /// `|X(F_{q^n})|` by enumeration.
    pub fn count_points_exhaustive(&self, n: u32) -> Result<u64> {
        let k = self.tower.ext(n);
        Ok(self.weier(&k).affine_points()?.len() as u64 + 1)
    }

    /// `|X(F_{q^n})| = q^n + 1 - (alpha^n + conj(alpha)^n)`.
    pub fn count_points(&self, n: u32) -> BigInt {
        let q = BigInt::from(self.q());
        let t = BigInt::from(self.trace);
        let (mut s0, mut s1) = (BigInt::from(2), t.clone());
        for _ in 1..n {
            let s2 = &t * &s1 - &q * &s0;
            s0 = s1;
            s1 = s2;
        }
        let s = if n == 0 { s0 } else { s1 };
        q.pow(n) + 1 - s
    }

    /// `B_d` by Moebius inversion of the point counts.
    pub fn closed_point_count(&self, d: u32) -> BigInt {
        let mut acc = BigInt::zero();
        for k in (1..=d).filter(|k| d % k == 0) {
            let mu = mobius(d / k);
            if mu != 0 {
                acc += self.count_points(k) * mu;
            }
        }
        acc / d
    }

    /// `B_d` by enumerating `X(F_{q^d})`.
    pub fn count_closed_points_exhaustive(&self, d: u32) -> Result<u64> {
        Ok(self.enumerate_degree(d)?.len() as u64)
    }

    /// Geometric representative and its field.
    pub fn geometric(&self, p: &EcPoint) -> (K, GeomPoint) {
        match p {
            EcPoint::Infinity => (self.tower.ext(1), None),
            EcPoint::Finite { degree, x, y } => (self.tower.ext(*degree), Some((x.clone(), y.clone()))),
        }
    }

    /// The closed point through a geometric point with coordinates in the
    /// canonical `F_{q^n}`; its orbit must have size `n`.
    pub fn closed_point(&self, n: u32, p: &GeomPoint) -> Result<EcPoint> {
        let Some((x, y)) = p else { return Ok(EcPoint::Infinity) };
        let k = self.tower.ext(n);
        let w = self.weier(&k);
        if !w.on_curve(x, y) {
            return Err(Error::OffCurve);
        }
        let orb = orbit(&w, p);
        if orb.len() != n as usize {
            return Err(Error::Precondition(format!("orbit has size {}, not {n}", orb.len())));
        }
        let (x, y) = orb.into_iter().flatten().min().unwrap();
        Ok(EcPoint::Finite { degree: n, x, y })
    }

    pub fn rational_point(&self, x: u32, y: u32) -> Result<EcPoint> {
        self.closed_point(1, &Some((vec![x], vec![y])))
    }

    fn rational_geom(&self, p: &EcPoint) -> Result<GeomPoint> {
        match p {
            EcPoint::Infinity => Ok(None),
            EcPoint::Finite { degree: 1, x, y } => Ok(Some((x.clone(), y.clone()))),
            _ => Err(Error::Precondition("group operations need rational points".into())),
        }
    }

    fn from_rational_geom(p: GeomPoint) -> EcPoint {
        match p {
            None => EcPoint::Infinity,
            Some((x, y)) => EcPoint::Finite { degree: 1, x, y },
        }
    }

    pub fn add(&self, p: &EcPoint, q: &EcPoint) -> Result<EcPoint> {
        let k = self.tower.ext(1);
        let w = self.weier(&k);
        Ok(Self::from_rational_geom(w.add(&self.rational_geom(p)?, &self.rational_geom(q)?)))
    }

    pub fn neg(&self, p: &EcPoint) -> Result<EcPoint> {
        let k = self.tower.ext(1);
        Ok(Self::from_rational_geom(self.weier(&k).neg(&self.rational_geom(p)?)))
    }

    pub fn smul(&self, n: i64, p: &EcPoint) -> Result<EcPoint> {
        let k = self.tower.ext(1);
        Ok(Self::from_rational_geom(self.weier(&k).smul(n, &self.rational_geom(p)?)))
    }

    /// The closed point `-P`.
    pub fn negate(&self, p: &EcPoint) -> EcPoint {
        let (k, g) = self.geometric(p);
        let n = self.weier(&k).neg(&g);
        self.closed_point(p.degree(), &n).expect("negation preserves the orbit size")
    }

    /// Sum of the conjugates of a closed point, a rational point.
    pub fn trace_point(&self, p: &EcPoint) -> EcPoint {
        let (k, g) = self.geometric(p);
        let w = self.weier(&k);
        let s = orbit(&w, &g).iter().fold(None, |acc, c| w.add(&acc, c));
        Self::from_rational_geom(s.map(|(x, y)| {
            debug_assert!(k.in_base(&x) && k.in_base(&y));
            (vec![x[0]], vec![y[0]])
        }))
    }

    /// `sigma(D)`: the group sum of `D`, in `X(F_q)`.
    pub fn sigma(&self, d: &EcDivisor) -> EcPoint {
        let k = self.tower.ext(1);
        let w = self.weier(&k);
        let mut acc: GeomPoint = None;
        for (p, m) in d.iter() {
            let t = self.rational_geom(&self.trace_point(p)).unwrap();
            acc = w.add(&acc, &w.smul(m, &t));
        }
        Self::from_rational_geom(acc)
    }

    pub fn is_principal(&self, d: &EcDivisor) -> bool {
        d.degree() == 0 && self.sigma(d) == EcPoint::Infinity
    }

    /// Whether `D - lQ` is non-special: `l(lQ - D) = 0`.
    pub fn is_nonspecial_shifted(&self, d: &EcDivisor, q: &EcPoint, l: u32) -> bool {
        let shifted = d.minus(&EcDivisor::point(q.clone(), l as i64));
        self.l_dim(&shifted.scaled(-1)) == 0
    }

    /// All closed points of degree `d` in canonical order (`q^d` within the
    /// enumeration limit).
    pub fn enumerate_degree(&self, d: u32) -> Result<Arc<Vec<EcPoint>>> {
        if let Some(v) = self.cache.lock().unwrap().points.get(&d) {
            return Ok(v.clone());
        }
        let k = self.tower.ext(d);
        let w = self.weier(&k);
        let mut set = BTreeSet::new();
        if d == 1 {
            set.insert(EcPoint::Infinity);
        }
        for (x, y) in w.affine_points()? {
            let g = Some((x, y));
            let orb = orbit(&w, &g);
            if orb.len() == d as usize {
                let (x, y) = orb.into_iter().flatten().min().unwrap();
                set.insert(EcPoint::Finite { degree: d, x, y });
            }
        }
        let v = Arc::new(set.into_iter().collect::<Vec<_>>());
        self.cache.lock().unwrap().points.insert(d, v.clone());
        Ok(v)
    }

    /// A closed point of degree `m`: the first in canonical order when
    /// enumeration is feasible, otherwise by seeded sampling of `x`.
    pub fn find_point_of_degree(&self, m: u32, seed: u64) -> Result<EcPoint> {
        if self.closed_point_count(m).is_zero() {
            return Err(Error::NoPoint(m));
        }
        if (self.q() as u64).checked_pow(m).is_some_and(|o| o <= ENUM_LIMIT) {
            return self.enumerate_degree(m)?.first().cloned().ok_or(Error::NoPoint(m));
        }
        let k = self.tower.ext(m);
        let w = self.weier(&k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = self.q();
        for _ in 0..10_000 {
            let x: Elem = (0..m).map(|_| rng.gen_range(0..q)).collect();
            for y in w.solve_y(&x)? {
                let g = Some((x.clone(), y));
                if let Ok(p) = self.closed_point(m, &g) {
                    return Ok(p);
                }
            }
        }
        Err(Error::NoPoint(m))
    }

    /// Multiplies two functions, reducing `y^2` by the curve equation.
    pub fn fn_mul(&self, f: &EcFunction, g: &EcFunction) -> EcFunction {
        let fq = self.base();
        let [a1, a2, a3, a4, a6] = self.a;
        let bb = poly::mul(fq, &f.b, &g.b);
        let h = poly::trim(fq, vec![a3, a1]);
        let r = poly::trim(fq, vec![a6, a4, a2, 1]);
        let a = poly::add(fq, &poly::mul(fq, &f.a, &g.a), &poly::mul(fq, &bb, &r));
        let b = poly::sub(
            fq,
            &poly::add(fq, &poly::mul(fq, &f.a, &g.b), &poly::mul(fq, &f.b, &g.a)),
            &poly::mul(fq, &bb, &h),
        );
        EcFunction::new(fq, a, b, poly::mul(fq, &f.c, &g.c)).unwrap()
    }

    fn local_param(&self, p: &EcPoint, r: usize) -> Arc<LocalParam> {
        let key = (p.clone(), r);
        if let Some(v) = self.cache.lock().unwrap().params.get(&key) {
            return v.clone();
        }
        let lp = Arc::new(self.compute_param(p, r));
        self.cache.lock().unwrap().params.insert(key, lp.clone());
        lp
    }

    fn compute_param(&self, p: &EcPoint, r: usize) -> LocalParam {
        let (k, g) = self.geometric(p);
        let w = self.weier(&k);
        let [a1, a2, a3, a4, a6] = w.a.clone();
        let cst = |e: &Elem| Series::constant(e.clone());
        let r = r.max(1);
        match g {
            None => {
                // z = -x/y, w = -1/y; w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3
                let cap = 3 + r as i64 + 1;
                let z = Series::from_poly(vec![k.zero(), k.one()]);
                let z2 = z.mul(&k, &z);
                let z3 = z2.mul(&k, &z);
                let mut ws = z3.clone();
                for _ in 0..=r {
                    let ww = ws.mul(&k, &ws);
                    let www = ww.mul(&k, &ws);
                    ws = z3
                        .add(&k, &z.mul(&k, &ws).scale(&k, &a1))
                        .add(&k, &z2.mul(&k, &ws).scale(&k, &a2))
                        .add(&k, &ww.scale(&k, &a3))
                        .add(&k, &z.mul(&k, &ww).scale(&k, &a4))
                        .add(&k, &www.scale(&k, &a6))
                        .with_prec(cap);
                }
                ws.normalize(&k);
                let winv = ws.inv(&k, r);
                let xz = z.mul(&k, &winv);
                let yz = winv.neg(&k);
                // t = x/y = -z
                let flip = |s: Series| {
                    let mut s = s;
                    for (i, c) in s.c.iter_mut().enumerate() {
                        if (s.v + i as i64).rem_euclid(2) == 1 {
                            *c = k.neg(c);
                        }
                    }
                    s
                };
                LocalParam { x: flip(xz), y: flip(yz), field: k }
            }
            Some((x0, y0)) => {
                let fy = k.add(&k.add(&y0, &y0), &w.h(&x0));
                let t = |c: &Elem| Series::from_poly(vec![c.clone(), k.one()]);
                if !k.is_zero(&fy) {
                    let xs = t(&x0);
                    let hx = xs.scale(&k, &a1).add(&k, &cst(&a3));
                    let rx = Series::compose(&k, &[a6.clone(), a4.clone(), a2.clone(), k.one()], &xs, EXACT);
                    let mut ys = Series::constant(y0.clone()).with_prec(1);
                    let mut prec = 1usize;
                    while prec < r {
                        prec = (2 * prec).min(r);
                        let y = Series { prec: EXACT, ..ys.clone() };
                        let gval = y.mul(&k, &y).add(&k, &hx.mul(&k, &y)).sub(&k, &rx).with_prec(prec as i64);
                        let gder = y.add(&k, &y).add(&k, &hx).with_prec(prec as i64);
                        let step = gval.mul(&k, &gder.inv(&k, prec));
                        ys = y.sub(&k, &step).with_prec(prec as i64);
                    }
                    LocalParam { x: xs, y: ys.with_prec(r as i64), field: k }
                } else {
                    // vertical tangent: t = y - y0, solve for x
                    let ys = t(&y0);
                    let mut xs = Series::constant(x0.clone()).with_prec(1);
                    let mut prec = 1usize;
                    while prec < r {
                        prec = (2 * prec).min(r);
                        let x = Series { prec: EXACT, ..xs.clone() };
                        let xx = x.mul(&k, &x);
                        let hval = ys
                            .mul(&k, &ys)
                            .add(&k, &x.mul(&k, &ys).scale(&k, &a1))
                            .add(&k, &ys.scale(&k, &a3))
                            .sub(&k, &xx.mul(&k, &x))
                            .sub(&k, &xx.scale(&k, &a2))
                            .sub(&k, &x.scale(&k, &a4))
                            .sub(&k, &cst(&a6))
                            .with_prec(prec as i64);
                        let hder = ys
                            .scale(&k, &a1)
                            .sub(&k, &xx.scale(&k, &k.from_int(3)))
                            .sub(&k, &x.scale(&k, &k.mul(&k.from_int(2), &a2)))
                            .sub(&k, &cst(&a4))
                            .with_prec(prec as i64);
                        let step = hval.mul(&k, &hder.inv(&k, prec));
                        xs = x.sub(&k, &step).with_prec(prec as i64);
                    }
                    LocalParam { x: xs.with_prec(r as i64), y: ys, field: k }
                }
            }
        }
    }

    /// Numerator `a(X) + b(X) Y` and denominator `c(X)` at working precision `r`.
    fn expand_parts(&self, f: &EcFunction, p: &EcPoint, r: usize) -> (K, Series, Series) {
        let lp = self.local_param(p, r);
        let k = &lp.field;
        let lift = |v: &[u32]| -> Vec<Elem> { v.iter().map(|&c| k.from_base(c)).collect() };
        let cap = if *p == EcPoint::Infinity { EXACT } else { r as i64 };
        let na = Series::compose(k, &lift(&f.a), &lp.x, cap);
        let nb = Series::compose(k, &lift(&f.b), &lp.x, cap);
        let num = na.add(k, &nb.mul(k, &lp.y));
        let den = Series::compose(k, &lift(&f.c), &lp.x, cap);
        (k.clone(), num, den)
    }

    /// `v_P(f)` and the normalized expansion of `f` with at least `rel`
    /// known terms. `rel` may depend on the valuation.
    fn expand(&self, f: &EcFunction, p: &EcPoint, rel: impl Fn(i64) -> i64) -> Result<(K, i64, Series)> {
        let mut r = (rel(0).max(1) as usize) + 4;
        loop {
            if r > 1 << 14 {
                return Err(Error::Internal("local expansion did not stabilize".into()));
            }
            let (k, mut num, mut den) = self.expand_parts(f, p, r);
            let (Some(vn), Some(vd)) = (num.normalize(&k), den.normalize(&k)) else {
                r *= 2;
                continue;
            };
            let val = vn - vd;
            let need = rel(val).max(1);
            let have = (num.prec - num.v).min(den.prec - den.v);
            if have < need {
                r *= 2;
                continue;
            }
            let q = num.mul(&k, &den.inv(&k, need as usize));
            return Ok((k, val, q));
        }
    }

    /// `v_P(f)`, `None` for the zero function.
    pub fn valuation(&self, f: &EcFunction, p: &EcPoint) -> Result<Option<i64>> {
        if f.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.expand(f, p, |_| 1)?.1))
    }

    /// Minimal polynomial over `F_q` of the `x`-coordinate of a finite point.
    fn x_min_poly(&self, p: &EcPoint) -> Poly<Fq> {
        let (k, g) = self.geometric(p);
        let (x0, _) = g.expect("finite point");
        let mut conj = vec![x0.clone()];
        let mut cur = k.frobenius_base(&x0);
        while cur != x0 {
            conj.push(cur.clone());
            cur = k.frobenius_base(&cur);
        }
        let mut m: Vec<Elem> = vec![k.one()];
        for c in &conj {
            m = poly::mul(&k, &m, &[k.neg(c), k.one()]);
        }
        m.iter().map(|e| {
            debug_assert!(k.in_base(e));
            e[0]
        }).collect()
    }
}

fn discriminant(f: &Fq, a: &[u32; 5]) -> u32 {
    let [a1, a2, a3, a4, a6] = *a;
    let m = |x: u32, y: u32| f.mulu(x, y);
    let s = |x: u32, y: u32| f.addu(x, y);
    let n = |k: i64| f.from_int(k);
    let b2 = s(m(a1, a1), m(n(4), a2));
    let b4 = s(m(n(2), a4), m(a1, a3));
    let b6 = s(m(a3, a3), m(n(4), a6));
    let b8 = f.subu(
        s(s(m(m(a1, a1), a6), m(n(4), m(a2, a6))), m(a2, m(a3, a3))),
        s(m(a1, m(a3, a4)), m(a4, a4)),
    );
    let t1 = f.negu(m(m(b2, b2), b8));
    let t2 = f.negu(m(n(8), m(b4, m(b4, b4))));
    let t3 = f.negu(m(n(27), m(b6, b6)));
    let t4 = m(n(9), m(b2, m(b4, b6)));
    s(s(t1, t2), s(t3, t4))
}

impl Curve for EllipticCurve {
    type Point = EcPoint;
    type Function = EcFunction;

    fn tower(&self) -> &FieldTower {
        &self.tower
    }

    fn genus(&self) -> u32 {
        1
    }

    fn l_dim(&self, d: &EcDivisor) -> usize {
        match d.degree() {
            n if n > 0 => n as usize,
            0 => self.is_principal(d) as usize,
            _ => 0,
        }
    }

    fn i_dim(&self, d: &EcDivisor) -> usize {
        self.l_dim(&d.scaled(-1))
    }

    fn rr_basis(&self, d: &EcDivisor) -> Result<Vec<EcFunction>> {
        let fq = self.base();
        let mut c: Poly<Fq> = vec![1];
        let mut constrained: BTreeSet<EcPoint> = BTreeSet::new();
        for (p, k) in d.iter() {
            if *p == EcPoint::Infinity {
                continue;
            }
            constrained.insert(p.clone());
            if k > 0 {
                c = poly::mul(fq, &c, &poly::pow(fq, &self.x_min_poly(p), k as u64));
                constrained.insert(self.negate(p));
            }
        }
        let budget = d.mult(&EcPoint::Infinity) + 2 * (c.len() as i64 - 1);
        if budget < 0 {
            return Ok(Vec::new());
        }
        let na = (budget / 2 + 1) as usize;
        let nb = if budget >= 3 { ((budget - 3) / 2 + 1) as usize } else { 0 };
        let cfun = EcFunction { a: c.clone(), b: vec![], c: vec![1] };
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for p in &constrained {
            let need = self.valuation(&cfun, p)?.unwrap() - d.mult(p);
            if need <= 0 {
                continue;
            }
            let lp = self.local_param(p, need as usize);
            let k = &lp.field;
            let mut cols: Vec<Series> = Vec::with_capacity(na + nb);
            let mut pw = Series::constant(k.one());
            for _ in 0..na {
                cols.push(pw.clone());
                pw = pw.mul(k, &lp.x).with_prec(need);
            }
            let mut pw = lp.y.clone().with_prec(need);
            for _ in 0..nb {
                cols.push(pw.clone());
                pw = pw.mul(k, &lp.x).with_prec(need);
            }
            for t in 0..need {
                let coeffs: Vec<Elem> = cols.iter().map(|s| s.coeff(k, t).expect("enough precision")).collect();
                for j in 0..k.degree() {
                    rows.push(coeffs.iter().map(|e| e[j]).collect());
                }
            }
        }
        let m = Matrix::from_rows_with_cols(&rows, na + nb);
        m.kernel_basis(fq)
            .into_iter()
            .map(|v| EcFunction::new(fq, v[..na].to_vec(), v[na..].to_vec(), c.clone()))
            .collect()
    }

    fn eval(&self, f: &EcFunction, p: &EcPoint, u: u32, shift: i64) -> Result<Vec<u32>> {
        let deg = p.degree() as usize;
        let mut out = vec![0u32; deg * u as usize];
        if f.is_zero() || u == 0 {
            return Ok(out);
        }
        // fast path: regular point, one coefficient
        if let (1, EcPoint::Finite { .. }) = (u, p) {
            let (k, g) = self.geometric(p);
            let (x0, y0) = g.unwrap();
            let ev = |v: &[u32]| v.iter().rev().fold(k.zero(), |acc, &c| k.add(&k.mul(&acc, &x0), &k.from_base(c)));
            let cx = ev(&f.c);
            if !k.is_zero(&cx) {
                let nv = k.add(&ev(&f.a), &k.mul(&ev(&f.b), &y0));
                if shift >= 1 {
                    return Ok(out);
                }
                if shift == 0 {
                    return Ok(k.mul(&nv, &k.inv(&cx).unwrap()));
                }
                if !k.is_zero(&nv) {
                    return Err(Error::PoleOrder { valuation: 0, shift });
                }
            }
        }
        let (k, val, qs) = self.expand(f, p, |v| u as i64 - (v + shift))?;
        if val < -shift {
            return Err(Error::PoleOrder { valuation: val, shift });
        }
        for i in (val + shift).max(0)..u as i64 {
            let c = qs.coeff(&k, i - shift).expect("enough precision");
            out[i as usize * deg..(i as usize + 1) * deg].copy_from_slice(&c);
        }
        Ok(out)
    }

    fn count_closed_points(&self, d: u32) -> u64 {
        let b = self.closed_point_count(d);
        if b.is_negative() {
            return 0;
        }
        b.to_u64().unwrap_or(u64::MAX)
    }

    fn points_of_degree(&self, d: u32, limit: usize) -> Result<Vec<EcPoint>> {
        Ok(self.enumerate_degree(d)?.iter().take(limit).cloned().collect())
    }
}

/// The first curve, in lexicographic order of `(a1,a2,a3,a4,a6)`, with
/// `q + 1 - t` rational points.
pub fn curve_with_trace(q: u32, t: i64) -> Result<EllipticCurve> {
    if !trace_is_admissible(q, t) {
        return Err(Error::NoCurve { q, t });
    }
    curves_by_trace(q)?.get(&t).cloned().ok_or(Error::NoCurve { q, t })
}

/// [`curve_with_trace`] for every admissible trace, from one scan (cached).
pub fn curves_by_trace(q: u32) -> Result<Arc<BTreeMap<i64, EllipticCurve>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<BTreeMap<i64, EllipticCurve>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&q) {
        return Ok(v.clone());
    }
    let tower = FieldTower::new(q)?;
    let f = tower.base().clone();
    let bound = (4 * q as i64) as f64;
    let tmax = bound.sqrt() as i64 + 1;
    let wanted = (-tmax..=tmax).filter(|&t| trace_is_admissible(q, t)).count();
    let k1 = tower.ext(1);
    let qq = q as u64;
    let mut first: BTreeMap<i64, [u32; 5]> = BTreeMap::new();
    for idx in 0..qq.pow(5) {
        let mut a = [0u32; 5];
        let mut r = idx;
        for c in a.iter_mut().rev() {
            *c = (r % qq) as u32;
            r /= qq;
        }
        if f.is_zero(&discriminant(&f, &a)) {
            continue;
        }
        let n = Weier::new(&k1, &a).affine_points()?.len() as i64 + 1;
        first.entry(q as i64 + 1 - n).or_insert(a);
        if first.len() == wanted {
            break;
        }
    }
    let mut out = BTreeMap::new();
    for (t, a) in first {
        out.insert(t, EllipticCurve::over(tower.clone(), a)?);
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(q, out.clone());
    Ok(out)
}

/// Whether some elliptic curve over `F_q` has trace `t` (Waterhouse).
pub fn trace_is_admissible(q: u32, t: i64) -> bool {
    let Some((p, r)) = crate::algebra::fq::prime_power(q) else { return false };
    let (p, q) = (p as i64, q as i64);
    if t * t > 4 * q {
        return false;
    }
    if t % p != 0 {
        return true;
    }
    let even = r % 2 == 0;
    let sq = |v: i64| t * t == v;
    (even && sq(4 * q))
        || (even && p % 3 != 1 && sq(q))
        || (!even && (p == 2 || p == 3) && sq(p * q))
        || (t == 0 && (!even || p % 4 != 1))
}

/// Parses `q=<q> a=[a1,a2,a3,a4,a6]`.
pub fn parse_curve(s: &str) -> Result<EllipticCurve> {
    let err = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
    let mut q = None;
    let mut a = None;
    for tok in s.split_whitespace() {
        if let Some(v) = tok.strip_prefix("q=") {
            q = Some(v.parse::<u32>().map_err(|_| err("bad q"))?);
        } else if let Some(v) = tok.strip_prefix("a=") {
            let inner = v.strip_prefix('[').and_then(|v| v.strip_suffix(']')).ok_or_else(|| err("expected [..]"))?;
            let vals = inner
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| err("bad coefficient")))
                .collect::<Result<Vec<_>>>()?;
            a = Some(<[u32; 5]>::try_from(vals).map_err(|_| err("need five coefficients"))?);
        } else {
            return Err(err(&format!("unexpected token {tok:?}")));
        }
    }
    EllipticCurve::new(q.ok_or_else(|| err("missing q"))?, a.ok_or_else(|| err("missing a"))?)
}

/// The curve `y^2 + y = x^3 + x + 1` over `F_2`.
pub fn curve_163() -> EllipticCurve {
    EllipticCurve::new(2, [0, 0, 1, 1, 1]).expect("nonsingular")
}
