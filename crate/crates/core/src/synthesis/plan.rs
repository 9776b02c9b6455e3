//! Choosing the evaluation divisor `G`: how many closed points of each
//! degree, and with which multiplicity.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bilinear::BoundCertificate;
use crate::curve::{ClosedPoint, Curve};
use crate::error::{Error, Result};

/// Supplies inner algorithms for the local algebras `A_q(d,u)`.
pub trait InnerProvider {
    fn q(&self) -> u32;
    /// Best known length of a (symmetric) algorithm for `A_q(d,u)`.
    fn cost(&mut self, d: u32, u: u32, sym: bool) -> Option<u64>;
    fn certificate(&mut self, d: u32, u: u32, sym: bool) -> Result<Arc<BoundCertificate>>;
}

/// `count` points of degree `d`, each taken with multiplicity `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellCount {
    pub d: u32,
    pub u: u32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GDecomposition {
    pub cells: Vec<CellCount>,
    pub degree: u64,
    pub cost: u64,
}

impl GDecomposition {
    /// `{nx(d,u), ...}`
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.cells.iter().map(|c| format!("{}x({},{})", c.count, c.d, c.u)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    cost: u64,
    total: u64,
    max_u: u32,
    max_d: u32,
    /// Points taken with multiplicity above one.
    thick: u64,
    cells: BTreeMap<(u32, u32), u64>,
}

impl State {
    fn with(&self, d: u32, u: u32, c: u64) -> State {
        let mut s = self.clone();
        s.cost += c;
        s.total += (d * u) as u64;
        s.thick += (u > 1) as u64;
        s.max_u = s.max_u.max(u);
        s.max_d = s.max_d.max(d);
        *s.cells.entry((d, u)).or_insert(0) += 1;
        s
    }
}

fn keep_best(slot: &mut Option<State>, cand: State) {
    if slot.as_ref().is_none_or(|s| cand < *s) {
        *slot = Some(cand);
    }
}

/// Cheapest multiset of cells with total degree at least `target`, using at
/// most `avail(d)` points of degree `d`. Ties go to the smaller total degree,
/// then to the smaller largest multiplicity, the smaller largest point
/// degree, fewer points with multiplicity, and finally the lexicographically
/// smaller cell list. `cells` lists the
/// admissible `(d, u, cost)`.
pub fn plan_g(avail: &dyn Fn(u32) -> u64, cells: &[(u32, u32, u64)], target: u64) -> Result<GDecomposition> {
    let t = target as usize;
    let mut by_degree: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for &(d, u, c) in cells {
        by_degree.entry(d).or_default().push((u, c));
    }
    let mut best: Vec<Option<State>> = vec![None; t + 1];
    best[0] = Some(State { cost: 0, total: 0, max_u: 0, max_d: 0, thick: 0, cells: BTreeMap::new() });
    for (&d, opts) in &by_degree {
        let limit = avail(d).min(target.div_ceil(d as u64)) as usize;
        let mut layer = best.clone();
        for _ in 0..limit {
            let mut next: Vec<Option<State>> = vec![None; t + 1];
            for (s, st) in layer.iter().enumerate() {
                let Some(st) = st else { continue };
                if s == t {
                    continue;
                }
                for &(u, c) in opts {
                    let s2 = (s + (d * u) as usize).min(t);
                    keep_best(&mut next[s2], st.with(d, u, c));
                }
            }
            if next.iter().all(|x| x.is_none()) {
                break;
            }
            for (slot, cand) in best.iter_mut().zip(&next) {
                if let Some(c) = cand {
                    keep_best(slot, c.clone());
                }
            }
            layer = next;
        }
    }
    match &best[t] {
        Some(s) => Ok(GDecomposition {
            cells: s.cells.iter().map(|(&(d, u), &count)| CellCount { d, u, count }).collect(),
            degree: s.total,
            cost: s.cost,
        }),
        None => {
            let reach = best.iter().rposition(|x| x.is_some()).unwrap_or(0);
            Err(Error::InsufficientPoints(format!(
                "degree {target} needed, at most {reach} reachable (deficit {})",
                target - reach as u64
            )))
        }
    }
}

/// Concrete points for a decomposition, in canonical order per degree;
/// within a degree, larger multiplicities take the earlier points.
pub fn select_points<C: Curve>(
    curve: &C,
    dec: &GDecomposition,
    exclude: Option<&C::Point>,
) -> Result<Vec<(C::Point, u32)>> {
    let mut out = Vec::new();
    let mut by_degree: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for c in &dec.cells {
        by_degree.entry(c.d).or_default().push((c.u, c.count));
    }
    for (d, mut us) in by_degree {
        us.sort_by(|a, b| b.0.cmp(&a.0));
        let need: u64 = us.iter().map(|x| x.1).sum();
        let pts: Vec<C::Point> = curve
            .points_of_degree(d, need as usize + 1)?
            .into_iter()
            .filter(|p| Some(p) != exclude)
            .take(need as usize)
            .collect();
        if (pts.len() as u64) < need {
            return Err(Error::InsufficientPoints(format!("{need} points of degree {d} requested, {} found", pts.len())));
        }
        let mut it = pts.into_iter();
        for (u, n) in us {
            for _ in 0..n {
                out.push((it.next().unwrap(), u));
            }
        }
    }
    debug_assert!(out.iter().all(|(p, _)| p.degree() > 0));
    Ok(out)
}

/// Admissible cells `(d, u)` with `d u < ml`, `d <= max_d`, `u <= max_u`,
/// priced by the provider.
pub fn priced_cells(
    provider: &mut dyn InnerProvider,
    m: u32,
    l: u32,
    max_d: u32,
    max_u: u32,
    sym: bool,
) -> Vec<(u32, u32, u64)> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        for u in 1..=max_u {
            if d * u >= m * l {
                break;
            }
            if let Some(c) = provider.cost(d, u, sym) {
                out.push((d, u, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_multiset_163() {
        let costs = [(1, 1, 1), (1, 2, 3), (1, 3, 5), (1, 4, 8), (1, 5, 11), (2, 1, 3), (3, 1, 6), (4, 1, 9), (5, 1, 13), (6, 1, 15), (7, 1, 22), (8, 1, 24)];
        let b = |d: u32| [0, 1, 2, 4, 5, 8, 8, 18, 25][d as usize];
        let dec = plan_g(&b, &costs, 329).unwrap();
        assert_eq!(dec.describe(), "{1x(1,5), 2x(2,1), 4x(3,1), 5x(4,1), 8x(5,1), 8x(6,1), 25x(8,1)}");
        assert_eq!((dec.degree, dec.cost), (329, 910));
    }

    #[test]
    fn prefers_simple_points_on_ties() {
        // 13 rational points, 2 of degree 2: three plans of cost 18 reach 16
        let costs = [(1, 1, 1), (1, 2, 3), (1, 3, 5), (2, 1, 3)];
        let b = |d: u32| [0, 13, 2][d as usize];
        let dec = plan_g(&b, &costs, 16).unwrap();
        assert_eq!(dec.describe(), "{12x(1,1), 2x(2,1)}");
    }

    #[test]
    fn deficit_reported() {
        let err = plan_g(&|_| 1, &[(1, 1, 1)], 3).unwrap_err();
        assert!(err.to_string().contains("deficit 2"), "{err}");
    }
}
