//! Interpolation on the projective line.

use crate::curve::p1::{P1Divisor, P1Point, ProjectiveLine};
use crate::curve::{ClosedPoint, Curve};
use crate::error::{Error, Result};

use super::interp::InterpolationPlan;
use super::plan::{plan_g, priced_cells, select_points, GDecomposition, InnerProvider};

/// Points of degree `d` usable in `G` when `Q` has degree `m`.
pub(crate) fn available<C: Curve>(curve: &C, m: u32) -> impl Fn(u32) -> u64 + '_ {
    move |d| {
        let n = curve.count_closed_points(d);
        if d == m && m >= 2 {
            n.saturating_sub(1)
        } else {
            n
        }
    }
}

/// Collects the inner certificates for the chosen points.
pub(crate) fn inner_for<P: ClosedPoint>(
    provider: &mut dyn InnerProvider,
    g: &[(P, u32)],
    sym: bool,
) -> Result<Vec<std::sync::Arc<crate::bilinear::BoundCertificate>>> {
    g.iter().map(|(p, u)| provider.certificate(p.degree(), *u, sym)).collect()
}

/// The decomposition of `G` for `A_q(m,l)` on the line: degree `2ml - 1`.
pub fn genus0_decomposition(
    line: &ProjectiveLine,
    m: u32,
    l: u32,
    provider: &mut dyn InnerProvider,
    sym: bool,
) -> Result<GDecomposition> {
    let ml = m * l;
    if ml < 2 {
        return Err(Error::Precondition("interpolation needs ml >= 2".into()));
    }
    let cells = priced_cells(provider, m, l, ml - 1, ml - 1, sym);
    plan_g(&available(line, m), &cells, (2 * ml - 1) as u64)
}

/// A READY plan with `D1 = D2 = (ml-1) inf` and `deg G = 2ml - 1`.
pub fn genus0_plan(
    line: &ProjectiveLine,
    m: u32,
    l: u32,
    provider: &mut dyn InnerProvider,
    sym: bool,
) -> Result<InterpolationPlan<ProjectiveLine>> {
    let dec = genus0_decomposition(line, m, l, provider, sym)?;
    let q_point = line.canonical_point(m);
    let g = select_points(line, &dec, (m >= 2).then_some(&q_point))?;
    let inner = inner_for(provider, &g, sym)?;
    let d = P1Divisor::point(P1Point::Infinity, (m * l - 1) as i64);
    Ok(InterpolationPlan { curve: line.clone(), m, l, q_point, g, d1: d.clone(), d2: d, inner })
}
