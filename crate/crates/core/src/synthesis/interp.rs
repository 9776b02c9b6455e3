//! Interpolation plans: condition checks and assembly of the bilinear
//! algorithm from evaluation maps.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Matrix, TruncatedAlgebra};
use crate::bilinear::{direct_sum_all, BilinearAlgorithm, BoundCertificate};
use crate::curve::{ClosedPoint, Curve, Divisor};
use crate::error::{Error, Result};

/// Everything needed to build an algorithm for `A_q(m,l)` on a curve.
#[derive(Clone)]
pub struct InterpolationPlan<C: Curve> {
    pub curve: C,
    pub m: u32,
    pub l: u32,
    /// The point `Q` of degree `m`.
    pub q_point: C::Point,
    /// `G = sum u_i P_i`, as `(P_i, u_i)`.
    pub g: Vec<(C::Point, u32)>,
    pub d1: Divisor<C::Point>,
    pub d2: Divisor<C::Point>,
    /// One inner algorithm per entry of `g`, for `A_q(deg P_i, u_i)`.
    pub inner: Vec<Arc<BoundCertificate>>,
}

impl<C: Curve> fmt::Debug for InterpolationPlan<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InterpolationPlan")
            .field("m", &self.m)
            .field("l", &self.l)
            .field("q_point", &self.q_point)
            .field("g", &self.g)
            .field("d1", &self.d1)
            .field("d2", &self.d2)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ready,
    /// `l(D1 + D2 - G) > 0`.
    FailI,
    /// `i(D1 - lQ) > 0`.
    FailII1,
    /// `i(D2 - lQ) > 0`.
    FailII2,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ready => "READY",
            Status::FailI => "FAIL(i')",
            Status::FailII1 => "FAIL(ii'1)",
            Status::FailII2 => "FAIL(ii'2)",
        })
    }
}

/// Divisor-level and matrix-level verdicts side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub status: Status,
    /// Joint evaluation on `L(D1+D2)` is injective.
    pub injective: bool,
    /// `L(D_k) -> A_q(m,l)` is surjective, `k = 1, 2`.
    pub surjective: [bool; 2],
}

impl<C: Curve> InterpolationPlan<C> {
    pub fn g_divisor(&self) -> Divisor<C::Point> {
        Divisor::from_terms(self.g.iter().map(|(p, u)| (p.clone(), *u as i64)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.d1 == self.d2 && self.inner.iter().all(|c| c.witness.is_symmetric())
    }

    pub fn length(&self) -> usize {
        self.inner.iter().map(|c| c.witness.len()).sum()
    }

    /// `(i')` and `(ii')` from Riemann-Roch data only.
    pub fn divisor_status(&self) -> Status {
        let lq = Divisor::point(self.q_point.clone(), self.l as i64);
        let c = &self.curve;
        if c.l_dim(&self.d1.plus(&self.d2).minus(&self.g_divisor())) != 0 {
            Status::FailI
        } else if c.i_dim(&self.d1.minus(&lq)) != 0 {
            Status::FailII1
        } else if c.i_dim(&self.d2.minus(&lq)) != 0 {
            Status::FailII2
        } else {
            Status::Ready
        }
    }
}

/// The evaluation matrices of a plan.
struct EvalMaps {
    /// `L(D_k) -> A_q(m,l)` (twisted by `t^{D_k(Q)}`).
    ev_q: [Matrix; 2],
    /// `L(D1+D2) -> A_q(m,l)`.
    ev_q12: Matrix,
    /// `L(D_k) -> prod A_q(d_i,u_i)`.
    ev_g: [Matrix; 2],
    /// `L(D1+D2) -> prod A_q(d_i,u_i)`.
    ev_g12: Matrix,
    dim12: usize,
}

fn stacked<C: Curve>(curve: &C, fs: &[C::Function], g: &[(C::Point, u32)], d: &Divisor<C::Point>) -> Result<Matrix> {
    let mut out = Matrix::zeros(0, fs.len());
    for (p, u) in g {
        out = out.vstack(&curve.eval_matrix(fs, p, *u, d.mult(p))?)?;
    }
    Ok(out)
}

fn eval_maps<C: Curve>(plan: &InterpolationPlan<C>) -> Result<EvalMaps> {
    let c = &plan.curve;
    let (q, l) = (&plan.q_point, plan.l);
    let b1 = c.rr_basis(&plan.d1)?;
    let b2 = if plan.d1 == plan.d2 { b1.clone() } else { c.rr_basis(&plan.d2)? };
    let d12 = plan.d1.plus(&plan.d2);
    let b12 = c.rr_basis(&d12)?;
    let ev_q1 = c.eval_matrix(&b1, q, l, plan.d1.mult(q))?;
    let ev_q2 = if plan.d1 == plan.d2 { ev_q1.clone() } else { c.eval_matrix(&b2, q, l, plan.d2.mult(q))? };
    let ev_g1 = stacked(c, &b1, &plan.g, &plan.d1)?;
    let ev_g2 = if plan.d1 == plan.d2 { ev_g1.clone() } else { stacked(c, &b2, &plan.g, &plan.d2)? };
    Ok(EvalMaps {
        ev_q: [ev_q1, ev_q2],
        ev_q12: c.eval_matrix(&b12, q, l, d12.mult(q))?,
        ev_g: [ev_g1, ev_g2],
        ev_g12: stacked(c, &b12, &plan.g, &d12)?,
        dim12: b12.len(),
    })
}

fn matrix_checks(plan: &InterpolationPlan<impl Curve>, maps: &EvalMaps) -> (bool, [bool; 2]) {
    let f = plan.curve.tower().base();
    let ml = (plan.m * plan.l) as usize;
    let injective = maps.ev_g12.rank(f) == maps.dim12;
    let surjective = [maps.ev_q[0].rank(f) == ml, maps.ev_q[1].rank(f) == ml];
    (injective, surjective)
}

/// Runs both the divisor-level conditions and the matrix-level checks, and
/// insists that `(i) <=> (i')` and `(ii') => (ii)`.
pub fn check_conditions<C: Curve>(plan: &InterpolationPlan<C>) -> Result<ConditionReport> {
    let status = plan.divisor_status();
    let maps = eval_maps(plan)?;
    let (injective, surjective) = matrix_checks(plan, &maps);
    let lq = Divisor::point(plan.q_point.clone(), plan.l as i64);
    let c = &plan.curve;
    let i_prime = c.l_dim(&plan.d1.plus(&plan.d2).minus(&plan.g_divisor())) == 0;
    if i_prime != injective {
        return Err(Error::Internal(format!(
            "l(D1+D2-G)=0 is {i_prime} but injectivity of the evaluation is {injective}"
        )));
    }
    for (k, d) in [&plan.d1, &plan.d2].into_iter().enumerate() {
        if c.i_dim(&d.minus(&lq)) == 0 && !surjective[k] {
            return Err(Error::Internal(format!("i(D{}-lQ)=0 but evaluation at Q is not surjective", k + 1)));
        }
    }
    Ok(ConditionReport { status, injective, surjective })
}

/// Builds and verifies the algorithm of a READY plan. Its length is the sum
/// of the inner lengths.
pub fn assemble<C: Curve>(plan: &InterpolationPlan<C>) -> Result<BilinearAlgorithm> {
    let tower = plan.curve.tower();
    let f = tower.base();
    if plan.inner.len() != plan.g.len() {
        return Err(Error::Dimension(format!("{} inner algorithms for {} points", plan.inner.len(), plan.g.len())));
    }
    for ((p, u), cert) in plan.g.iter().zip(&plan.inner) {
        if cert.q != f.q() || cert.m != p.degree() || cert.l != *u {
            return Err(Error::Dimension(format!(
                "inner algorithm {} does not match cell ({}, {u})",
                cert.key(),
                p.degree()
            )));
        }
    }
    let status = plan.divisor_status();
    if status != Status::Ready {
        return Err(Error::Precondition(format!("plan status {status}")));
    }
    let maps = eval_maps(plan)?;
    let sigma1 = maps.ev_q[0].right_inverse(f)?;
    let sigma2 = if plan.d1 == plan.d2 { sigma1.clone() } else { maps.ev_q[1].right_inverse(f)? };
    let rho = maps.ev_g12.left_inverse(f)?;
    let witnesses: Vec<&BilinearAlgorithm> = plan.inner.iter().map(|c| c.witness.as_ref()).collect();
    let inner = direct_sum_all(f, &witnesses)?;
    if inner.dim() != maps.ev_g12.rows() {
        return Err(Error::Dimension(format!(
            "product algebra has dimension {}, evaluation has {} rows",
            inner.dim(),
            maps.ev_g12.rows()
        )));
    }
    let e1 = maps.ev_g[0].mul(f, &sigma1)?;
    let phi = inner.phi().mul(f, &e1)?;
    let algebra = TruncatedAlgebra::new(tower, plan.m, plan.l)?.structure();
    let w = maps.ev_q12.mul(f, &rho)?.mul(f, inner.w())?;
    let alg = if plan.is_symmetric() {
        BilinearAlgorithm::symmetric(algebra, phi, w)?
    } else {
        let e2 = maps.ev_g[1].mul(f, &sigma2)?;
        let psi = inner.psi().mul(f, &e2)?;
        BilinearAlgorithm::new(algebra, phi, psi, w, false)?
    };
    alg.check()?;
    Ok(alg)
}
