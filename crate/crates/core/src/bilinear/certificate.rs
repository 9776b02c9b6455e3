use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::algorithm::BilinearAlgorithm;

/// Which construction produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Fixture,
    Naive,
    Genus0,
    Genus1,
    CompositeDescent,
    Concatenation,
    BruteForce,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Fixture => "fixture",
            Strategy::Naive => "naive",
            Strategy::Genus0 => "genus0",
            Strategy::Genus1 => "genus1",
            Strategy::CompositeDescent => "composite-descent",
            Strategy::Concatenation => "concatenation",
            Strategy::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An upper bound on `mu_q(m,l)` (or its symmetric variant) with the
/// algorithm that witnesses it.
#[derive(Clone, Debug)]
pub struct BoundCertificate {
    pub q: u32,
    pub m: u32,
    pub l: u32,
    pub symmetric: bool,
    pub bound: usize,
    pub strategy: Strategy,
    /// Short description of how the witness was built.
    pub recipe: String,
    pub witness: Arc<BilinearAlgorithm>,
}

impl BoundCertificate {
    pub fn new(q: u32, m: u32, l: u32, strategy: Strategy, recipe: impl Into<String>, witness: BilinearAlgorithm) -> Self {
        BoundCertificate {
            q,
            m,
            l,
            symmetric: witness.is_symmetric(),
            bound: witness.len(),
            strategy,
            recipe: recipe.into(),
            witness: Arc::new(witness),
        }
    }

    /// File stem used in certificate bundles.
    pub fn key(&self) -> String {
        format!("{}_{}_{}{}", self.q, self.m, self.l, if self.symmetric { "_sym" } else { "" })
    }

    /// Re-verifies the witness and its length.
    pub fn replay(&self) -> Result<()> {
        let w = &self.witness;
        if w.q() != self.q || w.dim() != (self.m * self.l) as usize {
            return Err(Error::Internal(format!("certificate {} has a witness of the wrong shape", self.key())));
        }
        if w.len() > self.bound {
            return Err(Error::Internal(format!("certificate {} witness is longer than its bound", self.key())));
        }
        if self.symmetric && !w.is_symmetric() {
            return Err(Error::Internal(format!("certificate {} witness is not symmetric", self.key())));
        }
        w.check()
    }
}
