use std::collections::BTreeMap;
use std::fmt::Debug;

/// A closed point: a Galois orbit of geometric points.
pub trait ClosedPoint: Clone + Ord + Debug {
    fn degree(&self) -> u32;
}

/// A finite formal sum of closed points with integer multiplicities.
/// Zero multiplicities are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor<P: ClosedPoint> {
    terms: BTreeMap<P, i64>,
}

impl<P: ClosedPoint> Default for Divisor<P> {
    fn default() -> Self {
        Divisor { terms: BTreeMap::new() }
    }
}

impl<P: ClosedPoint> Divisor<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: P, k: i64) -> Self {
        let mut d = Self::zero();
        d.add_point(p, k);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (P, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, k) in terms {
            d.add_point(p, k);
        }
        d
    }

    pub fn add_point(&mut self, p: P, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn mult(&self, p: &P) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, k)| p.degree() as i64 * k).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, i64)> {
        self.terms.iter().map(|(p, &k)| (p, k))
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&k| k > 0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (p, k) in other.iter() {
            d.add_point(p.clone(), k);
        }
        d
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self::from_terms(self.iter().map(|(p, k)| (p.clone(), k * c)))
    }

    /// Positive and negative parts.
    pub fn split(&self) -> (Self, Self) {
        let pos = Self::from_terms(self.iter().filter(|(_, k)| *k > 0).map(|(p, k)| (p.clone(), k)));
        let neg = Self::from_terms(self.iter().filter(|(_, k)| *k < 0).map(|(p, k)| (p.clone(), -k)));
        (pos, neg)
    }
}
