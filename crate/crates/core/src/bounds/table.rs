//! Memoized best-known bounds with certificates.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::algebra::fq::prime_power;
use crate::algebra::{FieldTower, TruncatedAlgebra};
use crate::bilinear::{
    brute_force_witness_within, descend, lower_bounds, naive_symmetric, BoundCertificate, Strategy,
};
use crate::curve::elliptic::{curve_with_trace, EllipticCurve};
use crate::curve::p1::ProjectiveLine;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::synthesis::{assemble, genus0_plan, genus1_best, InnerProvider, InterpolationPlan};

/// Table key: `(q, m, l, symmetric)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    pub q: u32,
    pub m: u32,
    pub l: u32,
    pub sym: bool,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub genus1: bool,
    /// Genus-1 sweeps only over fields with at most this many elements.
    pub genus1_max_q: u32,
    /// Interpolation cells `A_q(d,u)` only with `du` at most this.
    pub max_cell: u32,
    /// Work budget for exact rank searches; 0 disables them.
    pub brute_force_budget: u64,
    /// Largest `q^d` used as an intermediate field in descents.
    pub max_descent_field: u32,
    /// Seed for sampling points of large degree.
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { genus1: true, genus1_max_q: 64, max_cell: 10, brute_force_budget: 2_000_000, max_descent_field: 256, seed: 0 }
    }
}

/// Best-known upper bounds for `mu_q(m,l)` and `mu_q^sym(m,l)`.
#[derive(Default)]
pub struct BoundTable {
    opts: TableOptions,
    entries: BTreeMap<Key, Arc<BoundCertificate>>,
    log: Vec<String>,
    busy: HashSet<Key>,
    curves: HashMap<(u32, i64), Option<EllipticCurve>>,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl BoundTable {
    pub fn new(opts: TableOptions) -> Self {
        BoundTable { opts, ..Default::default() }
    }

    pub fn options(&self) -> &TableOptions {
        &self.opts
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Key, &Arc<BoundCertificate>)> {
        self.entries.iter()
    }

    pub fn get(&self, q: u32, m: u32, l: u32, sym: bool) -> Option<&Arc<BoundCertificate>> {
        self.entries.get(&Key { q, m, l, sym })
    }

    /// Update log, one line per change.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Stores `cert` if it beats the current entry. Returns whether it did.
    pub fn offer(&mut self, key: Key, cert: Arc<BoundCertificate>) -> Result<bool> {
        cert.replay()?;
        if (cert.q, cert.m, cert.l) != (key.q, key.m, key.l) || (key.sym && !cert.witness.is_symmetric()) {
            return Err(Error::Precondition(format!("certificate {} does not fit {key:?}", cert.key())));
        }
        let lower = lower_bounds(cert.witness.algebra());
        if cert.bound < lower {
            return Err(Error::Internal(format!("bound {} below the lower bound {lower}", cert.bound)));
        }
        let old = self.entries.get(&key).map(|c| c.bound);
        if old.is_some_and(|b| b <= cert.bound) {
            return Ok(false);
        }
        self.log.push(format!(
            "q={} m={} l={} sym={}: {} -> {} ({})",
            key.q,
            key.m,
            key.l,
            key.sym,
            old.map_or("-".to_string(), |b| b.to_string()),
            cert.bound,
            cert.strategy
        ));
        self.entries.insert(key, cert);
        Ok(true)
    }

    /// The best certificate for `A_q(m,l)`, computing it on first use.
    pub fn improve(&mut self, q: u32, m: u32, l: u32, sym: bool) -> Result<Arc<BoundCertificate>> {
        let key = Key { q, m, l, sym };
        if let Some(c) = self.entries.get(&key) {
            return Ok(c.clone());
        }
        if m == 0 || l == 0 {
            return Err(Error::Precondition("m and l must be positive".into()));
        }
        if !self.busy.insert(key) {
            return Err(Error::Internal(format!("recursive request for {key:?}")));
        }
        let res = self.compute(key);
        self.busy.remove(&key);
        let cert = Arc::new(res?);
        self.offer(key, cert)?;
        Ok(self.entries[&key].clone())
    }

    /// A provider over `F_q` backed by this table.
    pub fn provider(&mut self, q: u32) -> TableProvider<'_> {
        TableProvider { table: self, q }
    }

    fn curve(&mut self, q: u32, t: i64) -> Option<EllipticCurve> {
        self.curves.entry((q, t)).or_insert_with(|| curve_with_trace(q, t).ok()).clone()
    }

    fn compute(&mut self, key: Key) -> Result<BoundCertificate> {
        let Key { q, m, l, sym } = key;
        let tower = FieldTower::new(q)?;
        let alg = TruncatedAlgebra::new(&tower, m, l)?.structure();
        let mut best = BoundCertificate::new(q, m, l, Strategy::Naive, "schoolbook", naive_symmetric(&alg)?);
        let lower = lower_bounds(&alg);
        let consider = |best: &mut BoundCertificate, c: BoundCertificate| {
            if c.bound < best.bound {
                *best = c;
            }
        };
        if !sym {
            let s = self.improve(q, m, l, true)?;
            if s.bound < best.bound {
                best = BoundCertificate { symmetric: false, ..(*s).clone() };
            }
        }
        if m * l >= 2 {
            let line = ProjectiveLine::over(tower.clone());
            if let Ok(plan) = genus0_plan(&line, m, l, &mut self.provider(q), sym) {
                if plan.length() < best.bound {
                    let recipe = format!("P1 over F_{q}, G = {}", describe_g(&plan));
                    consider(&mut best, BoundCertificate::new(q, m, l, Strategy::Genus0, recipe, assemble(&plan)?));
                }
            }
            if self.opts.genus1 && q <= self.opts.genus1_max_q && best.bound > lower {
                let bound = isqrt(4 * q as u64) as i64;
                let mut cands: Vec<(InterpolationPlan<EllipticCurve>, i64)> = Vec::new();
                for t in -bound..=bound {
                    let Some(curve) = self.curve(q, t) else { continue };
                    let seed = self.opts.seed;
                    if let Ok(p) = genus1_best(&curve, m, l, &mut self.provider(q), sym, seed) {
                        cands.push((p, t));
                    }
                }
                cands.sort_by_key(|(p, _)| p.length());
                if let Some((plan, t)) = cands.into_iter().next() {
                    if plan.length() < best.bound {
                        let recipe = format!("{} (t={t}), G = {}", plan.curve, describe_g(&plan));
                        consider(&mut best, BoundCertificate::new(q, m, l, Strategy::Genus1, recipe, assemble(&plan)?));
                    }
                }
            }
        }
        if prime_power(q).is_some_and(|(_, r)| r == 1) {
            for d in 2..=m {
                if m % d != 0 || (d == m && l == 1) {
                    continue;
                }
                let Some(qd) = q.checked_pow(d).filter(|&v| v <= self.opts.max_descent_field) else { continue };
                let e = m / d;
                let outer = self.improve(qd, e, l, sym)?;
                let inner = self.improve(q, d, 1, sym)?;
                if outer.bound * inner.bound >= best.bound {
                    continue;
                }
                let alg = descend(&inner.witness, &outer.witness, e, l)?;
                if sym && !alg.is_symmetric() {
                    continue;
                }
                let (strategy, recipe) = if d == m {
                    (Strategy::Concatenation, format!("mu_{q}({m}) x mu_{qd}(1,{l}) = {} x {}", inner.bound, outer.bound))
                } else {
                    (
                        Strategy::CompositeDescent,
                        format!("mu_{q}({d}) x mu_{qd}({e},{l}) = {} x {}", inner.bound, outer.bound),
                    )
                };
                consider(&mut best, BoundCertificate::new(q, m, l, strategy, recipe, alg));
            }
        }
        if self.opts.brute_force_budget > 0 && best.bound > lower {
            match brute_force_witness_within(&alg, best.bound - 1, sym, self.opts.brute_force_budget) {
                Ok(Some(w)) => consider(&mut best, BoundCertificate::new(q, m, l, Strategy::BruteForce, "exact search", w)),
                Ok(None) | Err(Error::SearchTooLarge(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if !sym {
            best.symmetric = false;
        }
        Ok(best)
    }

    /// All entries with `ml <= max_ml`, both columns.
    pub fn fill(&mut self, q: u32, max_ml: u32) -> Result<()> {
        for ml in 1..=max_ml {
            for m in 1..=ml {
                if ml % m == 0 {
                    self.improve(q, m, ml / m, true)?;
                    self.improve(q, m, ml / m, false)?;
                }
            }
        }
        Ok(())
    }
}

/// `{nx(d,u), ...}` for the points of a plan.
pub fn describe_g<C: Curve>(plan: &InterpolationPlan<C>) -> String {
    use crate::curve::ClosedPoint;
    let mut cells: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (p, u) in &plan.g {
        *cells.entry((p.degree(), *u)).or_insert(0) += 1;
    }
    let parts: Vec<String> = cells.iter().map(|(&(d, u), &n)| format!("{n}x({d},{u})")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// [`InnerProvider`] view of a table for one base field.
pub struct TableProvider<'a> {
    table: &'a mut BoundTable,
    q: u32,
}

impl InnerProvider for TableProvider<'_> {
    fn q(&self) -> u32 {
        self.q
    }

    fn cost(&mut self, d: u32, u: u32, sym: bool) -> Option<u64> {
        if d * u > self.table.opts.max_cell {
            return None;
        }
        self.table.improve(self.q, d, u, sym).ok().map(|c| c.bound as u64)
    }

    fn certificate(&mut self, d: u32, u: u32, sym: bool) -> Result<Arc<BoundCertificate>> {
        self.table.improve(self.q, d, u, sym)
    }
}

/// Prices cells from a fixed cost list where it has them, and from the table
/// otherwise; certificates always come from the table.
pub struct FixedCostProvider<'a> {
    pub table: &'a mut BoundTable,
    pub q: u32,
    pub costs: HashMap<(u32, u32), u64>,
}

impl InnerProvider for FixedCostProvider<'_> {
    fn q(&self) -> u32 {
        self.q
    }

    fn cost(&mut self, d: u32, u: u32, sym: bool) -> Option<u64> {
        match self.costs.get(&(d, u)) {
            Some(&c) => Some(c),
            None if self.costs.is_empty() => self.table.improve(self.q, d, u, sym).ok().map(|c| c.bound as u64),
            None => None,
        }
    }

    fn certificate(&mut self, d: u32, u: u32, sym: bool) -> Result<Arc<BoundCertificate>> {
        self.table.improve(self.q, d, u, sym)
    }
}
