//! Divisor selection on curves of positive genus: the four elliptic cases,
//! the iterative gap searches and an exhaustive class search.

use std::fmt;

use crate::curve::elliptic::{EcDivisor, EcPoint, EllipticCurve};
use crate::curve::{ClosedPoint, Curve, Divisor};
use crate::error::{Error, Result};

use super::genus0::{available, inner_for};
use super::interp::InterpolationPlan;
use super::plan::{plan_g, priced_cells, select_points, GDecomposition, InnerProvider};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    A,
    B,
    C,
    D,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::A, Case::B, Case::C, Case::D];

    /// Minimal `deg G` for the case.
    pub fn target(self, m: u32, l: u32) -> u64 {
        let n = 2 * (m * l) as u64;
        match self {
            Case::A | Case::B => n,
            Case::C => n + 1,
            Case::D => n + 3,
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        match s {
            "a" => Some(Case::A),
            "b" => Some(Case::B),
            "c" => Some(Case::C),
            "d" => Some(Case::D),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Case::A => 'a',
            Case::B => 'b',
            Case::C => 'c',
            Case::D => 'd',
        };
        write!(f, "{c}")
    }
}

/// `R - P_inf`.
fn z_of(r: &EcPoint) -> EcDivisor {
    Divisor::from_terms([(r.clone(), 1), (EcPoint::Infinity, -1)])
}

fn all_two_torsion(curve: &EllipticCurve, pts: &[EcPoint]) -> Result<bool> {
    for p in pts {
        if curve.smul(2, p)? != EcPoint::Infinity {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(D1, D2)` for `A_q(deg Q, l)` and a given `G`, following one of the
/// elliptic cases. The pair always satisfies `(i')` and `(ii')`.
pub fn genus1_select(
    curve: &EllipticCurve,
    q: &EcPoint,
    l: u32,
    g: &EcDivisor,
    case: Case,
) -> Result<(EcDivisor, EcDivisor)> {
    let m = q.degree();
    let deg = g.degree().max(0) as u64;
    let need = case.target(m, l);
    if deg < need {
        return Err(Error::Precondition(format!("case {case} needs deg G >= {need}, got {deg}")));
    }
    let rational = curve.points_of_degree(1, usize::MAX)?;
    let nonzero: Vec<&EcPoint> = rational.iter().filter(|p| **p != EcPoint::Infinity).collect();
    let min_points = match case {
        Case::A => 3,
        Case::B | Case::C => 2,
        Case::D => 0,
    };
    if rational.len() < min_points {
        return Err(Error::Precondition(format!(
            "case {case} needs |X(F_q)| >= {min_points}, curve has {}",
            rational.len()
        )));
    }
    let lq = EcDivisor::point(q.clone(), l as i64);
    let zero_dim = |d1: &EcDivisor, d2: &EcDivisor| curve.l_dim(&d1.plus(d2).minus(g)) == 0;
    let (d1, d2) = match case {
        Case::A => {
            let d1 = lq.plus(&z_of(nonzero[0]));
            if zero_dim(&d1, &d1) {
                (d1.clone(), d1)
            } else {
                let d2 = lq.plus(&z_of(nonzero[1]));
                (d1, d2)
            }
        }
        Case::B => {
            if curve.sigma(g) == EcPoint::Infinity && all_two_torsion(curve, &rational)? {
                return Err(Error::Precondition(
                    "case b needs sigma(G) != P_inf or a rational point of order > 2".into(),
                ));
            }
            let found = nonzero.iter().map(|r| lq.plus(&z_of(r))).find(|d| zero_dim(d, d));
            let d = found.ok_or_else(|| Error::Exhausted("no R with 2lQ + 2(R - P_inf) - G nonprincipal".into()))?;
            (d.clone(), d)
        }
        Case::C => {
            let d = lq.plus(&z_of(nonzero[0]));
            (d.clone(), d)
        }
        Case::D => {
            let d = EcDivisor::point(EcPoint::Infinity, (m * l + 1) as i64);
            (d.clone(), d)
        }
    };
    if !zero_dim(&d1, &d2) || curve.i_dim(&d1.minus(&lq)) != 0 || curve.i_dim(&d2.minus(&lq)) != 0 {
        return Err(Error::Internal(format!("case {case} produced divisors failing the conditions")));
    }
    Ok((d1, d2))
}

/// Log of an iterative search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    /// One line per accepted increment.
    pub steps: Vec<String>,
    /// Riemann-Roch computations not settled by the degree alone.
    pub rr_calls: usize,
    /// Candidates rejected before each accepted increment.
    pub rejections: Vec<usize>,
}

/// `l(D) = 0`, answered from the degree when possible.
fn zero_dim<C: Curve>(curve: &C, d: &Divisor<C::Point>, trace: &mut SearchTrace) -> bool {
    let deg = d.degree();
    let g = curve.genus() as i64;
    if deg < 0 {
        return true;
    }
    if deg > 2 * g - 2 {
        return false;
    }
    trace.rr_calls += 1;
    curve.l_dim(d) == 0
}

fn search_pre<C: Curve>(
    curve: &C,
    q: &C::Point,
    l: u32,
    g: &Divisor<C::Point>,
    s: &[C::Point],
    min_points: u32,
) -> Result<()> {
    let genus = curve.genus();
    if (s.len() as u32) < min_points {
        return Err(Error::Precondition(format!("{min_points} rational points needed, {} given", s.len())));
    }
    if s.iter().any(|p| p.degree() != 1) {
        return Err(Error::Precondition("search points must be rational".into()));
    }
    let need = (2 * q.degree() * l + genus) as i64 - 1;
    if g.degree() < need {
        return Err(Error::Precondition(format!("deg G must be at least {need}, got {}", g.degree())));
    }
    Ok(())
}

/// Extends `start` by `genus` points of `s`, each the first passing `ok`.
fn extend<C: Curve>(
    curve: &C,
    start: Divisor<C::Point>,
    s: &[C::Point],
    name: &str,
    trace: &mut SearchTrace,
    mut ok: impl FnMut(&Divisor<C::Point>, &mut SearchTrace) -> bool,
) -> Result<Divisor<C::Point>> {
    let mut cur = start;
    for i in 0..curve.genus() {
        let mut rejected = 0;
        let mut next = None;
        for p in s {
            let cand = cur.plus(&Divisor::point(p.clone(), 1));
            if ok(&cand, trace) {
                trace.steps.push(format!("{name}{i} = {name}{} + {p:?} after {rejected} rejections", i as i64 - 1));
                next = Some(cand);
                break;
            }
            rejected += 1;
        }
        trace.rejections.push(rejected);
        cur = next.ok_or_else(|| {
            Error::Internal(format!("{name}-sequence stalled at step {i}: all {} points rejected", s.len()))
        })?;
    }
    Ok(cur)
}

/// Builds `D1` then `D2` one point at a time from `s` (at least `2g+1`
/// rational points, `s[0]` used as the base point).
pub fn iterative_search_asym<C: Curve>(
    curve: &C,
    q: &C::Point,
    l: u32,
    g: &Divisor<C::Point>,
    s: &[C::Point],
) -> Result<(Divisor<C::Point>, Divisor<C::Point>, SearchTrace)> {
    search_pre(curve, q, l, g, s, 2 * curve.genus() + 1)?;
    let mut trace = SearchTrace::default();
    let lq = Divisor::point(q.clone(), l as i64);
    let start = Divisor::point(s[0].clone(), (q.degree() * l) as i64 - 1);
    let d1 = extend(curve, start.clone(), s, "Y", &mut trace, |y, t| zero_dim(curve, &y.minus(&lq), t))?;
    let d2 = extend(curve, start, s, "Z", &mut trace, |z, t| {
        zero_dim(curve, &z.minus(&lq), t) && zero_dim(curve, &d1.plus(z).minus(g), t)
    })?;
    Ok((d1, d2, trace))
}

/// Symmetric variant: one divisor `D` with `l(D - lQ) = l(2D - G) = 0`, from
/// at least `5g+1` rational points.
pub fn iterative_search_sym<C: Curve>(
    curve: &C,
    q: &C::Point,
    l: u32,
    g: &Divisor<C::Point>,
    t: &[C::Point],
) -> Result<(Divisor<C::Point>, SearchTrace)> {
    search_pre(curve, q, l, g, t, 5 * curve.genus() + 1)?;
    let mut trace = SearchTrace::default();
    let lq = Divisor::point(q.clone(), l as i64);
    let start = Divisor::point(t[0].clone(), (q.degree() * l) as i64 - 1);
    let d = extend(curve, start, t, "T", &mut trace, |d, tr| {
        zero_dim(curve, &d.minus(&lq), tr) && zero_dim(curve, &d.scaled(2).minus(g), tr)
    })?;
    Ok((d, trace))
}

/// Tries `D_k = lQ + R - P_inf` over all rational `R` (one representative
/// per degree-0 class): first `D1` with `i(D1 - lQ) = 0`, then `D2` that also
/// makes `D1 + D2 - G` zero-dimensional.
pub fn exhaustive_class_search(
    curve: &EllipticCurve,
    q: &EcPoint,
    l: u32,
    g: &EcDivisor,
) -> Result<(EcDivisor, EcDivisor)> {
    let rational = curve.points_of_degree(1, usize::MAX)?;
    let lq = EcDivisor::point(q.clone(), l as i64);
    let candidates: Vec<EcDivisor> = rational.iter().map(|r| lq.plus(&z_of(r))).collect();
    let nonspecial = |d: &EcDivisor| curve.i_dim(&d.minus(&lq)) == 0;
    let d1 = candidates
        .iter()
        .find(|d| nonspecial(d))
        .ok_or_else(|| Error::Exhausted(format!("all {} classes give i(D1 - lQ) > 0", candidates.len())))?;
    let d2 = candidates
        .iter()
        .find(|d| nonspecial(d) && curve.l_dim(&d1.plus(d).minus(g)) == 0)
        .ok_or_else(|| Error::Exhausted(format!("no class for D2 among {}", candidates.len())))?;
    Ok((d1.clone(), d2.clone()))
}

/// How `D1, D2` are chosen on an elliptic curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selection {
    Case(Case),
    IterativeAsym,
    IterativeSym,
    Exhaustive,
}

impl Selection {
    pub fn target(self, m: u32, l: u32) -> u64 {
        match self {
            Selection::Case(c) => c.target(m, l),
            _ => 2 * (m * l) as u64,
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Case(c) => write!(f, "case {c}"),
            Selection::IterativeAsym => f.write_str("iterative"),
            Selection::IterativeSym => f.write_str("iterative-sym"),
            Selection::Exhaustive => f.write_str("class-search"),
        }
    }
}

/// The decomposition of `G` for a selection.
pub fn genus1_decomposition(
    curve: &EllipticCurve,
    m: u32,
    l: u32,
    provider: &mut dyn InnerProvider,
    sel: Selection,
    sym: bool,
) -> Result<GDecomposition> {
    let ml = m * l;
    let cells = priced_cells(provider, m, l, ml.max(2) - 1, ml.max(2) - 1, sym);
    plan_g(&available(curve, m), &cells, sel.target(m, l))
}

/// A plan on an elliptic curve, with the search trace when an iterative
/// search was used. `Q` is the point of degree `m` found with `seed`.
pub fn genus1_plan(
    curve: &EllipticCurve,
    m: u32,
    l: u32,
    provider: &mut dyn InnerProvider,
    sel: Selection,
    sym: bool,
    seed: u64,
) -> Result<(InterpolationPlan<EllipticCurve>, Option<SearchTrace>)> {
    let dec = genus1_decomposition(curve, m, l, provider, sel, sym)?;
    let q_point = curve.find_point_of_degree(m, seed)?;
    let g = select_points(curve, &dec, (m >= 2).then_some(&q_point))?;
    let g_div = EcDivisor::from_terms(g.iter().map(|(p, u)| (p.clone(), *u as i64)));
    let rational = || curve.points_of_degree(1, usize::MAX);
    let (d1, d2, trace) = match sel {
        Selection::Case(c) => {
            let (a, b) = genus1_select(curve, &q_point, l, &g_div, c)?;
            (a, b, None)
        }
        Selection::IterativeAsym => {
            let (a, b, t) = iterative_search_asym(curve, &q_point, l, &g_div, &rational()?)?;
            (a, b, Some(t))
        }
        Selection::IterativeSym => {
            let (d, t) = iterative_search_sym(curve, &q_point, l, &g_div, &rational()?)?;
            (d.clone(), d, Some(t))
        }
        Selection::Exhaustive => {
            let (a, b) = exhaustive_class_search(curve, &q_point, l, &g_div)?;
            (a, b, None)
        }
    };
    if sym && d1 != d2 {
        return Err(Error::Precondition(format!("{sel} gave D1 != D2, no symmetric plan")));
    }
    let inner = inner_for(provider, &g, sym)?;
    Ok((InterpolationPlan { curve: curve.clone(), m, l, q_point, g, d1, d2, inner }, trace))
}

/// The cheapest of the four cases (earlier case on ties).
pub fn genus1_best(
    curve: &EllipticCurve,
    m: u32,
    l: u32,
    provider: &mut dyn InnerProvider,
    sym: bool,
    seed: u64,
) -> Result<InterpolationPlan<EllipticCurve>> {
    let mut best: Option<InterpolationPlan<EllipticCurve>> = None;
    let mut last_err = None;
    for c in Case::ALL {
        match genus1_plan(curve, m, l, provider, Selection::Case(c), sym, seed) {
            Ok((p, _)) => {
                if best.as_ref().is_none_or(|b| p.length() < b.length()) {
                    best = Some(p);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Exhausted("no case applies".into())))
}
