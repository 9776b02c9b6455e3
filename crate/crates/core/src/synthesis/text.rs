//! Plain-text form of interpolation plans.
//!
//! ```text
//! curve E q=5 a=[0,0,1,1,1]
//! m 2
//! l 2
//! sym 1
//! Q <0.1/2.0>
//! G inf^1 <0/1>^1 ...
//! D1 inf^4
//! D2 inf^4
//! inner 5_1_1_sym 5_1_1_sym ...
//! ```
//!
//! Points: `inf`; on the line a monic polynomial `[c0,c1,..,1]`; on an
//! elliptic curve `<x0.x1../y0.y1..>` with coordinates in the canonical
//! `F_{q^d}`. Divisors are space-separated `point^k` terms, or `0`.

use std::collections::BTreeMap;

use crate::curve::elliptic::{parse_curve, EcPoint, EllipticCurve};
use crate::curve::p1::{P1Point, ProjectiveLine};
use crate::curve::{ClosedPoint, Curve, Divisor};
use crate::error::{Error, Result};

use super::interp::InterpolationPlan;
use super::plan::InnerProvider;

/// Curves with a text literal for themselves and their points.
pub trait TextCurve: Curve + Sized {
    fn literal(&self) -> String;
    fn from_literal(s: &str) -> Result<Self>;
    fn point_literal(&self, p: &Self::Point) -> String;
    fn parse_point(&self, s: &str) -> Result<Self::Point>;
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

fn digits(s: &str, sep: char) -> Result<Vec<u32>> {
    s.split(sep).map(|c| c.trim().parse::<u32>().map_err(|_| perr(format!("bad coefficient {c:?}")))).collect()
}

fn dotted(v: &[u32]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
}

impl TextCurve for ProjectiveLine {
    fn literal(&self) -> String {
        format!("P1 q={}", self.q())
    }

    fn from_literal(s: &str) -> Result<Self> {
        let q = s
            .strip_prefix("P1")
            .and_then(|r| r.trim().strip_prefix("q="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(format!("bad line literal {s:?}")))?;
        ProjectiveLine::new(q)
    }

    fn point_literal(&self, p: &P1Point) -> String {
        match p {
            P1Point::Infinity => "inf".into(),
            P1Point::Finite(c) => format!("[{}]", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    fn parse_point(&self, s: &str) -> Result<P1Point> {
        if s == "inf" {
            return Ok(P1Point::Infinity);
        }
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| perr(format!("bad point {s:?}")))?;
        let c = digits(inner, ',')?;
        if c.iter().any(|&v| v >= self.q()) {
            return Err(perr(format!("coefficient out of range in {s:?}")));
        }
        let p = P1Point::Finite(c);
        self.check_point(&p).map_err(|_| perr(format!("{s} is not monic irreducible")))?;
        Ok(p)
    }
}

impl TextCurve for EllipticCurve {
    fn literal(&self) -> String {
        format!("E {self}")
    }

    fn from_literal(s: &str) -> Result<Self> {
        let rest = s.strip_prefix("E ").ok_or_else(|| perr(format!("bad curve literal {s:?}")))?;
        parse_curve(rest)
    }

    fn point_literal(&self, p: &EcPoint) -> String {
        match p {
            EcPoint::Infinity => "inf".into(),
            EcPoint::Finite { x, y, .. } => format!("<{}/{}>", dotted(x), dotted(y)),
        }
    }

    fn parse_point(&self, s: &str) -> Result<EcPoint> {
        if s == "inf" {
            return Ok(EcPoint::Infinity);
        }
        let inner = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')).ok_or_else(|| perr(format!("bad point {s:?}")))?;
        let (x, y) = inner.split_once('/').ok_or_else(|| perr(format!("bad point {s:?}")))?;
        let (x, y) = (digits(x, '.')?, digits(y, '.')?);
        if x.len() != y.len() || x.is_empty() || x.iter().chain(&y).any(|&v| v >= self.q()) {
            return Err(perr(format!("bad coordinates in {s:?}")));
        }
        let n = x.len() as u32;
        let p = self.closed_point(n, &Some((x, y))).map_err(|e| perr(format!("{s}: {e}")))?;
        if self.point_literal(&p) != s {
            return Err(perr(format!("{s} is not the canonical representative {}", self.point_literal(&p))));
        }
        Ok(p)
    }
}

pub fn divisor_literal<C: TextCurve>(c: &C, d: &Divisor<C::Point>) -> String {
    let parts: Vec<String> = d.iter().map(|(p, k)| format!("{}^{k}", c.point_literal(p))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn terms<C: TextCurve>(c: &C, s: &str) -> Result<Vec<(C::Point, i64)>> {
    if s.trim() == "0" {
        return Ok(Vec::new());
    }
    s.split_whitespace()
        .map(|t| {
            let (p, k) = t.rsplit_once('^').unwrap_or((t, "1"));
            Ok((c.parse_point(p)?, k.parse::<i64>().map_err(|_| perr(format!("bad multiplicity in {t:?}")))?))
        })
        .collect()
}

pub fn parse_divisor_literal<C: TextCurve>(c: &C, s: &str) -> Result<Divisor<C::Point>> {
    Ok(Divisor::from_terms(terms(c, s)?))
}

/// The text form of a plan.
pub fn write_plan<C: TextCurve>(plan: &InterpolationPlan<C>) -> String {
    let c = &plan.curve;
    let g: Vec<String> = plan.g.iter().map(|(p, u)| format!("{}^{u}", c.point_literal(p))).collect();
    let inner: Vec<String> = plan.inner.iter().map(|i| i.key()).collect();
    format!(
        "curve {}\nm {}\nl {}\nsym {}\nQ {}\nG {}\nD1 {}\nD2 {}\ninner {}\n",
        c.literal(),
        plan.m,
        plan.l,
        plan.is_symmetric() as u8,
        c.point_literal(&plan.q_point),
        g.join(" "),
        divisor_literal(c, &plan.d1),
        divisor_literal(c, &plan.d2),
        inner.join(" ")
    )
}

/// Rebuilds a plan from [`write_plan`] output, fetching the inner
/// certificates named on the `inner` line from `provider`.
pub fn read_plan<C: TextCurve>(text: &str, provider: &mut dyn InnerProvider) -> Result<InterpolationPlan<C>> {
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once(' ').unwrap_or((line, ""));
        if fields.insert(k, (i + 1, v.trim())).is_some() {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate field {k}") });
        }
    }
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Parse { line: 0, msg: format!("missing field {k}") });
    let at = |line: usize| move |e: Error| match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        e => e,
    };
    let num = |k: &str| -> Result<u32> {
        let (line, v) = field(k)?;
        v.parse().map_err(|_| Error::Parse { line, msg: format!("bad {k} value {v:?}") })
    };
    let (line, lit) = field("curve")?;
    let curve = C::from_literal(lit).map_err(at(line))?;
    let (m, l) = (num("m")?, num("l")?);
    let (line, v) = field("Q")?;
    let q_point = curve.parse_point(v).map_err(at(line))?;
    if q_point.degree() != m {
        return Err(Error::Parse { line, msg: format!("Q has degree {}, not {m}", q_point.degree()) });
    }
    let (gline, v) = field("G")?;
    let mut g = Vec::new();
    for (p, u) in terms(&curve, v).map_err(at(gline))? {
        if u <= 0 || p == q_point {
            return Err(Error::Parse { line: gline, msg: "G needs positive multiplicities away from Q".into() });
        }
        g.push((p, u as u32));
    }
    let (line, v) = field("D1")?;
    let d1 = parse_divisor_literal(&curve, v).map_err(at(line))?;
    let (line, v) = field("D2")?;
    let d2 = parse_divisor_literal(&curve, v).map_err(at(line))?;
    let (line, v) = field("inner")?;
    let keys: Vec<&str> = v.split_whitespace().collect();
    if keys.len() != g.len() {
        return Err(Error::Parse { line, msg: format!("{} inner keys for {} points", keys.len(), g.len()) });
    }
    let mut inner = Vec::new();
    for (key, (p, u)) in keys.iter().zip(&g) {
        let want = format!("{}_{}_{u}", curve.q(), p.degree());
        let sym = match key.strip_prefix(want.as_str()) {
            Some("") => false,
            Some("_sym") => true,
            _ => return Err(Error::Parse { line, msg: format!("inner key {key} does not match the point, expected {want}") }),
        };
        inner.push(provider.certificate(p.degree(), *u, sym)?);
    }
    let plan = InterpolationPlan { curve, m, l, q_point, g, d1, d2, inner };
    let (line, v) = field("sym")?;
    if v != (plan.is_symmetric() as u8).to_string() {
        return Err(Error::Parse { line, msg: format!("sym {v} disagrees with the plan") });
    }
    Ok(plan)
}
