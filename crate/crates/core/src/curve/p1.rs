//! The projective line over `F_q`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::algebra::ext::{count_irreducibles, is_irreducible};
use crate::algebra::poly::{self, Poly};
use crate::algebra::{hensel_lift, irreducibles, FieldTower, Fq, HenselLift};
use crate::error::{Error, Result};

use super::{ClosedPoint, Curve, Divisor};

/// A closed point of `P^1`: infinity or a monic irreducible polynomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point {
    Infinity,
    Finite(Vec<u32>),
}

impl ClosedPoint for P1Point {
    fn degree(&self) -> u32 {
        match self {
            P1Point::Infinity => 1,
            P1Point::Finite(p) => (p.len() - 1) as u32,
        }
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Infinity => f.write_str("inf"),
            P1Point::Finite(p) => write!(f, "{p:?}"),
        }
    }
}

pub type P1Divisor = Divisor<P1Point>;

/// A rational function `num / den` in lowest terms, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1Function {
    pub num: Poly<Fq>,
    pub den: Poly<Fq>,
}

impl P1Function {
    pub fn new(f: &Fq, num: Poly<Fq>, den: Poly<Fq>) -> Result<Self> {
        let num = poly::trim(f, num);
        let den = poly::trim(f, den);
        if den.is_empty() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let g = poly::gcd(f, &num, &den);
        let (mut n, _) = poly::divrem(f, &num, &g);
        let (mut d, _) = poly::divrem(f, &den, &g);
        let lead = f.invu(*d.last().unwrap()).unwrap();
        n = poly::scale(f, &n, &lead);
        d = poly::scale(f, &d, &lead);
        Ok(P1Function { num: n, den: d })
    }

    pub fn poly(f: &Fq, p: Poly<Fq>) -> Self {
        P1Function { num: poly::trim(f, p), den: vec![1] }
    }

    pub fn mul(&self, f: &Fq, other: &Self) -> Self {
        Self::new(f, poly::mul(f, &self.num, &other.num), poly::mul(f, &self.den, &other.den)).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// `v_P(f)`; `None` for the zero function.
    pub fn valuation(&self, f: &Fq, p: &P1Point) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match p {
            P1Point::Infinity => self.den.len() as i64 - self.num.len() as i64,
            P1Point::Finite(m) => {
                poly::multiplicity(f, &self.num, m).0 as i64 - poly::multiplicity(f, &self.den, m).0 as i64
            }
        })
    }
}

/// `P^1` over `F_q`, with a cache of Hensel identifications.
#[derive(Clone)]
pub struct ProjectiveLine {
    tower: FieldTower,
    lifts: Arc<Mutex<HashMap<(Vec<u32>, u32), Arc<HenselLift>>>>,
}

impl fmt::Debug for ProjectiveLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P^1 over F_{}", self.q())
    }
}

impl ProjectiveLine {
    pub fn new(q: u32) -> Result<Self> {
        Ok(Self::over(FieldTower::new(q)?))
    }

    pub fn over(tower: FieldTower) -> Self {
        ProjectiveLine { tower, lifts: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn base(&self) -> &Fq {
        self.tower.base()
    }

    fn lift(&self, p: &[u32], u: u32) -> Result<Arc<HenselLift>> {
        let key = (p.to_vec(), u);
        if let Some(h) = self.lifts.lock().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let h = Arc::new(hensel_lift(&self.tower, p, u)?);
        self.lifts.lock().unwrap().insert(key, h.clone());
        Ok(h)
    }

    /// Checks that a finite point is given by a monic irreducible.
    pub fn check_point(&self, p: &P1Point) -> Result<()> {
        if let P1Point::Finite(m) = p {
            if m.last() != Some(&1) || !is_irreducible(self.base(), m) {
                return Err(Error::Reducible);
            }
        }
        Ok(())
    }

    /// The canonical point of degree `m`: the modulus of `F_{q^m}` (infinity for `m = 1`
    /// is not used; the polynomial `x` is).
    pub fn canonical_point(&self, m: u32) -> P1Point {
        P1Point::Finite(self.tower.ext(m).modulus().to_vec())
    }
}

impl Curve for ProjectiveLine {
    type Point = P1Point;
    type Function = P1Function;

    fn tower(&self) -> &FieldTower {
        &self.tower
    }

    fn genus(&self) -> u32 {
        0
    }

    fn l_dim(&self, d: &P1Divisor) -> usize {
        (d.degree() + 1).max(0) as usize
    }

    fn i_dim(&self, d: &P1Divisor) -> usize {
        (-d.degree() - 1).max(0) as usize
    }

    /// `L(D)` has basis `x^i z / h`, `0 <= i <= deg D`, where `h` collects the
    /// finite poles allowed by `D` and `z` the finite zeros it requires.
    fn rr_basis(&self, d: &P1Divisor) -> Result<Vec<P1Function>> {
        let f = self.base();
        let mut h = vec![1];
        let mut z = vec![1];
        for (p, k) in d.iter() {
            self.check_point(p)?;
            if let P1Point::Finite(m) = p {
                let pk = poly::pow(f, m, k.unsigned_abs());
                if k > 0 {
                    h = poly::mul(f, &h, &pk);
                } else {
                    z = poly::mul(f, &z, &pk);
                }
            }
        }
        let top = d.degree();
        (0..=top)
            .map(|i| P1Function::new(f, poly::mul(f, &poly::monomial(f, i as usize), &z), h.clone()))
            .collect()
    }

    fn eval(&self, g: &P1Function, p: &P1Point, u: u32, shift: i64) -> Result<Vec<u32>> {
        let f = self.base();
        let dim = (p.degree() * u) as usize;
        if g.is_zero() {
            return Ok(vec![0; dim]);
        }
        let v = g.valuation(f, p).unwrap();
        if v < -shift {
            return Err(Error::PoleOrder { valuation: v, shift });
        }
        let e = (v + shift) as u64;
        if e >= u as u64 {
            return Ok(vec![0; dim]);
        }
        match p {
            P1Point::Infinity => {
                // x = 1/t: f = t^v rev(num)/rev(den), rev(den)(0) = 1
                let rn: Vec<u32> = g.num.iter().rev().copied().collect();
                let rd: Vec<u32> = g.den.iter().rev().copied().collect();
                let prec = u as usize - e as usize;
                let series = series_div(f, &rn, &rd, prec);
                let mut out = vec![0; dim];
                out[e as usize..].copy_from_slice(&series);
                Ok(out)
            }
            P1Point::Finite(m) => {
                let h = self.lift(m, u)?;
                let (_, n1) = poly::multiplicity(f, &g.num, m);
                let (_, d1) = poly::multiplicity(f, &g.den, m);
                let modulus = h.modulus();
                let dinv = poly::invmod(f, &d1, modulus).expect("denominator is a unit at P");
                let mut val = poly::mulmod(f, &n1, &dinv, modulus);
                val = poly::mulmod(f, &val, &poly::pow(f, m, e), modulus);
                Ok(h.to_truncated(&val))
            }
        }
    }

    fn count_closed_points(&self, d: u32) -> u64 {
        let n = count_irreducibles(self.q(), d) + (d == 1) as u128;
        n.min(u64::MAX as u128) as u64
    }

    /// Degree 1: the finite points in polynomial order, then infinity.
    fn points_of_degree(&self, d: u32, limit: usize) -> Result<Vec<P1Point>> {
        let avail = self.count_closed_points(d).min(usize::MAX as u64) as usize;
        let take = limit.min(avail);
        let finite = take.min(count_irreducibles(self.q(), d).min(usize::MAX as u128) as usize);
        let mut out: Vec<P1Point> =
            irreducibles(self.base(), d, finite)?.into_iter().map(P1Point::Finite).collect();
        if out.len() < take {
            out.push(P1Point::Infinity);
        }
        Ok(out)
    }
}

/// `a / b mod t^prec` for power series with `b(0) != 0`.
fn series_div(f: &Fq, a: &[u32], b: &[u32], prec: usize) -> Vec<u32> {
    let b0inv = f.invu(b[0]).expect("unit constant term");
    let mut out = vec![0u32; prec];
    for k in 0..prec {
        let mut c = a.get(k).copied().unwrap_or(0);
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            c = f.subu(c, f.mulu(b[j], out[k - j]));
        }
        out[k] = f.mulu(c, b0inv);
    }
    out
}

/// Parses `inf^3,[1,1,1]^2` (multiplicity defaults to 1, may be negative).
pub fn parse_divisor(line: &ProjectiveLine, s: &str) -> Result<P1Divisor> {
    let err = |msg: String| Error::Parse { line: 1, msg };
    let mut d = P1Divisor::zero();
    let s = s.trim();
    if s.is_empty() || s == "0" {
        return Ok(d);
    }
    let mut rest = s;
    while !rest.is_empty() {
        let (pt, after) = if let Some(r) = rest.strip_prefix("inf") {
            (P1Point::Infinity, r)
        } else if rest.starts_with('[') {
            let close = rest.find(']').ok_or_else(|| err(format!("unclosed polynomial in {s:?}")))?;
            let coeffs = rest[1..close]
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| err(format!("bad coefficient {c:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if coeffs.iter().any(|&c| c >= line.q()) {
                return Err(err("coefficient out of range".into()));
            }
            let p = P1Point::Finite(coeffs);
            line.check_point(&p).map_err(|_| err(format!("{:?} is not monic irreducible", &rest[..=close])))?;
            (p, &rest[close + 1..])
        } else {
            return Err(err(format!("unexpected {rest:?}")));
        };
        let (mult, after) = match after.strip_prefix('^') {
            Some(r) => {
                let end = r.find(',').unwrap_or(r.len());
                let k: i64 = r[..end].trim().parse().map_err(|_| err(format!("bad multiplicity {:?}", &r[..end])))?;
                (k, &r[end..])
            }
            None => (1, after),
        };
        d.add_point(pt, mult);
        rest = after.strip_prefix(',').unwrap_or(after).trim_start();
        if !after.is_empty() && !after.starts_with(',') {
            return Err(err(format!("expected ',' before {after:?}")));
        }
    }
    Ok(d)
}

pub fn format_divisor(d: &P1Divisor) -> String {
    let parts: Vec<String> = d
        .iter()
        .map(|(p, k)| {
            let name = match p {
                P1Point::Infinity => "inf".to_string(),
                P1Point::Finite(c) => {
                    format!("[{}]", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                }
            };
            format!("{name}^{k}")
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_literal_round_trip() {
        let line = ProjectiveLine::new(2).unwrap();
        let d = parse_divisor(&line, "inf^3,[1,1,1]^2").unwrap();
        assert_eq!(d.degree(), 7);
        assert_eq!(parse_divisor(&line, &format_divisor(&d)).unwrap(), d);
        assert!(parse_divisor(&line, "[1,0,1]^2").is_err());
        assert!(parse_divisor(&line, "[1,1,1]^x").is_err());
        assert_eq!(parse_divisor(&line, "[0,1]^-2,inf").unwrap().degree(), -1);
    }

    #[test]
    fn series_division() {
        let f = Fq::new(2).unwrap();
        // 1/(1+t) = 1 + t + t^2 + ...
        assert_eq!(series_div(&f, &[1], &[1, 1], 4), vec![1, 1, 1, 1]);
    }
}
