//! Ways of building new algorithms from old ones.

use crate::algebra::ext::roots;
use crate::algebra::{Field, FieldTower, Fq, Matrix, StructureAlgebra, TruncatedAlgebra};
use crate::error::{Error, Result};

use super::algorithm::BilinearAlgorithm;

/// The length-1 algorithm for the base field over itself.
pub fn identity(base: &Fq) -> BilinearAlgorithm {
    let one = Matrix::identity(1);
    BilinearAlgorithm::symmetric(StructureAlgebra::base_field(base.clone()), one.clone(), one).unwrap()
}

/// `F_{p^r}` as an algebra over `F_p`, on the digit basis of its elements.
pub fn field_as_algebra(big: &Fq) -> Result<StructureAlgebra> {
    let p = big.p();
    let r = big.r() as usize;
    let small = Fq::prime(p)?;
    let mut c = Vec::with_capacity(r * r * r);
    for i in 0..r {
        for j in 0..r {
            let prod = big.mulu(p.pow(i as u32), p.pow(j as u32));
            c.extend(big.digits(prod));
        }
    }
    let mut unity = vec![0; r];
    unity[0] = 1;
    Ok(StructureAlgebra::new(small, r, c, Some(unity))?.with_field_hint(true))
}

/// Symmetric algorithm of length at most `2n` from an arbitrary one
/// (odd characteristic, commutative algebra). Vanishing terms are dropped.
pub fn symmetrize(alg: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    let f = alg.base();
    if f.p() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !alg.algebra().is_commutative() {
        return Err(Error::NotCommutative);
    }
    if alg.is_symmetric() {
        return Ok(alg.clone());
    }
    // xy = sum 1/4 (phi+psi)(x)(phi+psi)(y) w - 1/4 (phi-psi)(x)(phi-psi)(y) w
    let quarter = f.invu(f.from_int(4)).unwrap();
    let minus_quarter = f.negu(quarter);
    let d = alg.dim();
    let mut forms = Vec::new();
    let mut ws = Vec::new();
    for i in 0..alg.len() {
        let (a, b) = (alg.phi().row(i), alg.psi().row(i));
        let wcol = alg.w().col(i);
        let sum: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| f.addu(x, y)).collect();
        let diff: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| f.subu(x, y)).collect();
        for (form, coef) in [(sum, quarter), (diff, minus_quarter)] {
            if form.iter().any(|&v| v != 0) && wcol.iter().any(|&v| v != 0) {
                forms.push(form);
                ws.push(wcol.iter().map(|&v| f.mulu(v, coef)).collect::<Vec<_>>());
            }
        }
    }
    let phi = Matrix::from_rows_with_cols(&forms, d);
    let w = Matrix::from_cols(&ws, d);
    BilinearAlgorithm::symmetric(alg.algebra().clone(), phi, w)
}

/// The symmetric algorithm of length `d(d+1)/2` read off the structure
/// constants: `e_i e_j` against `(x_i + x_j)(y_i + y_j)` for `i < j` and
/// `2 e_i^2 - e_i s` against `x_i y_i`, where `s = sum_j e_j`.
pub fn naive_symmetric(a: &StructureAlgebra) -> Result<BilinearAlgorithm> {
    if !a.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let f = a.base();
    let d = a.dim();
    let mut forms = Vec::new();
    let mut ws = Vec::new();
    for i in 0..d {
        let mut form = vec![0; d];
        form[i] = 1;
        forms.push(form);
        let mut w: Vec<u32> = a.basis_product(i, i).to_vec();
        for j in (0..d).filter(|&j| j != i) {
            for (wk, &c) in w.iter_mut().zip(a.basis_product(i, j)) {
                *wk = f.subu(*wk, c);
            }
        }
        ws.push(w);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut form = vec![0; d];
            form[i] = 1;
            form[j] = 1;
            forms.push(form);
            ws.push(a.basis_product(i, j).to_vec());
        }
    }
    let phi = Matrix::from_rows_with_cols(&forms, d);
    let w = Matrix::from_cols(&ws, d);
    BilinearAlgorithm::symmetric(a.clone(), phi, w)
}

/// Composes an algorithm for `L = F_{p^m}` over `F_p` (`outer`) with an
/// algorithm for an `L`-algebra `A` (`inner`, whose base table field is `L`).
/// The result multiplies `A` viewed over `F_p`, on the basis `z^k e_s` at
/// index `s m + k`, where `z^k` runs over the digit basis of `L`.
pub fn concatenate(outer: &BilinearAlgorithm, inner: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    let big = inner.base().clone();
    let small = outer.base().clone();
    let m = outer.dim();
    if small.r() != 1 || big.p() != small.p() || big.r() as usize != m {
        return Err(Error::BaseMismatch(format!(
            "outer over {small:?} of dimension {m}, inner over {big:?}"
        )));
    }
    if field_as_algebra(&big)? != *outer.algebra() {
        return Err(Error::BaseMismatch("outer algebra is not the inner base field".into()));
    }
    let p = small.p();
    let e = inner.dim();
    let dim = e * m;
    let zk: Vec<u32> = (0..m).map(|k| p.pow(k as u32)).collect();

    // structure constants of A over F_p
    let ia = inner.algebra();
    let mut consts = vec![0u32; dim * dim * dim];
    for s in 0..e {
        for k in 0..m {
            for s2 in 0..e {
                for k2 in 0..m {
                    let z = big.mulu(zk[k], zk[k2]);
                    let base = ((s * m + k) * dim + s2 * m + k2) * dim;
                    for (r, &c) in ia.basis_product(s, s2).iter().enumerate() {
                        for (dg, v) in big.digits(big.mulu(z, c)).into_iter().enumerate() {
                            consts[base + r * m + dg] = v;
                        }
                    }
                }
            }
        }
    }
    let unity = ia.unity().map(|u| u.iter().flat_map(|&c| big.digits(c)).collect());
    let algebra = StructureAlgebra::new(small.clone(), dim, consts, unity)?.with_field_hint(ia.field_hint());

    // phi_{i,j}(x) = alpha_i(lambda_j(x)); the L-coordinates of lambda_j on
    // z^k e_s are Lambda_{js} z^k
    let compose = |outer_forms: &Matrix, inner_forms: &Matrix| -> Vec<Vec<u32>> {
        let mut rows = Vec::with_capacity(outer.len() * inner.len());
        for j in 0..inner.len() {
            let images: Vec<Vec<u32>> = (0..dim)
                .map(|idx| big.digits(big.mulu(inner_forms.get(j, idx / m), zk[idx % m])))
                .collect();
            for i in 0..outer.len() {
                let a = outer_forms.row(i);
                rows.push(
                    images
                        .iter()
                        .map(|img| img.iter().zip(a).fold(0, |acc, (&u, &v)| small.addu(acc, small.mulu(u, v))))
                        .collect(),
                );
            }
        }
        rows
    };
    let phi = Matrix::from_rows_with_cols(&compose(outer.phi(), inner.phi()), dim);
    let psi = if outer.is_symmetric() && inner.is_symmetric() {
        phi.clone()
    } else {
        Matrix::from_rows_with_cols(&compose(outer.psi(), inner.psi()), dim)
    };
    // w_{i,j} = l_i a_j
    let mut ws = Vec::with_capacity(outer.len() * inner.len());
    for j in 0..inner.len() {
        for i in 0..outer.len() {
            let li = small_vec_to_big(&big, &outer.w().col(i));
            let mut col = vec![0; dim];
            for s in 0..e {
                let c = big.mulu(li, inner.w().get(s, j));
                for (dg, v) in big.digits(c).into_iter().enumerate() {
                    col[s * m + dg] = v;
                }
            }
            ws.push(col);
        }
    }
    let w = Matrix::from_cols(&ws, dim);
    let sym = outer.is_symmetric() && inner.is_symmetric();
    BilinearAlgorithm::new(algebra, phi, psi, w, sym)
}

fn small_vec_to_big(big: &Fq, v: &[u32]) -> u32 {
    big.from_digits(v)
}

/// Algorithm for `A x B` from algorithms for `A` and `B`.
pub fn direct_sum(a: &BilinearAlgorithm, b: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    let algebra = a.algebra().product(b.algebra())?;
    let phi = Matrix::block_diag(&[a.phi().clone(), b.phi().clone()]);
    let psi = Matrix::block_diag(&[a.psi().clone(), b.psi().clone()]);
    let w = Matrix::block_diag(&[a.w().clone(), b.w().clone()]);
    BilinearAlgorithm::new(algebra, phi, psi, w, a.is_symmetric() && b.is_symmetric())
}

/// Direct sum of many algorithms (the empty sum is the zero algebra).
pub fn direct_sum_all(base: &Fq, algs: &[&BilinearAlgorithm]) -> Result<BilinearAlgorithm> {
    if algs.is_empty() {
        let z = Matrix::zeros(0, 0);
        return BilinearAlgorithm::symmetric(StructureAlgebra::zero(base.clone()), z.clone(), z);
    }
    let mut consts_alg = StructureAlgebra::zero(base.clone());
    for a in algs {
        consts_alg = consts_alg.product(a.algebra())?;
    }
    let phi = Matrix::block_diag(&algs.iter().map(|a| a.phi().clone()).collect::<Vec<_>>());
    let psi = Matrix::block_diag(&algs.iter().map(|a| a.psi().clone()).collect::<Vec<_>>());
    let w = Matrix::block_diag(&algs.iter().map(|a| a.w().clone()).collect::<Vec<_>>());
    let sym = algs.iter().all(|a| a.is_symmetric());
    BilinearAlgorithm::new(consts_alg, phi, psi, w, sym)
}

/// Algorithm for `A (x) B`; term `(i, j)` sits at index `i n_B + j`.
pub fn tensor_product(a: &BilinearAlgorithm, b: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    let algebra = a.algebra().tensor(b.algebra())?;
    let f = a.base();
    let kron_rows = |x: &Matrix, y: &Matrix| -> Vec<Vec<u32>> {
        let mut rows = Vec::new();
        for i in 0..x.rows() {
            for j in 0..y.rows() {
                let mut r = Vec::with_capacity(x.cols() * y.cols());
                for &u in x.row(i) {
                    for &v in y.row(j) {
                        r.push(f.mulu(u, v));
                    }
                }
                rows.push(r);
            }
        }
        rows
    };
    let d = algebra.dim();
    let phi = Matrix::from_rows_with_cols(&kron_rows(a.phi(), b.phi()), d);
    let psi = Matrix::from_rows_with_cols(&kron_rows(a.psi(), b.psi()), d);
    let w = Matrix::from_rows_with_cols(&kron_rows(&a.w().transpose(), &b.w().transpose()), d).transpose();
    BilinearAlgorithm::new(algebra, phi, psi, w, a.is_symmetric() && b.is_symmetric())
}

/// How a restriction map relates the two algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Injective algebra morphism `A' -> A` (`dim A x dim A'` matrix).
    Subalgebra,
    /// Surjective algebra morphism `A -> A'` (`dim A' x dim A` matrix).
    Quotient,
}

/// Transfers an algorithm for `A` to a subalgebra or quotient `A'`.
pub fn restrict(
    alg: &BilinearAlgorithm,
    map: &Matrix,
    target: &StructureAlgebra,
    kind: Restriction,
) -> Result<BilinearAlgorithm> {
    let f = alg.base();
    let src = alg.algebra();
    let (inj, proj) = match kind {
        Restriction::Subalgebra => {
            if map.rows() != src.dim() || map.cols() != target.dim() {
                return Err(Error::Dimension("subalgebra map shape".into()));
            }
            (map.clone(), map.left_inverse(f)?)
        }
        Restriction::Quotient => {
            if map.cols() != src.dim() || map.rows() != target.dim() {
                return Err(Error::Dimension("quotient map shape".into()));
            }
            (map.right_inverse(f)?, map.clone())
        }
    };
    // morphism check on basis pairs
    let d2 = target.dim();
    let unit = |i: usize, n: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    for a in 0..d2 {
        for b in 0..d2 {
            let ok = match kind {
                Restriction::Subalgebra => {
                    let lhs = map.mul_vec(f, target.basis_product(a, b));
                    let rhs = src.mul(&map.col(a), &map.col(b));
                    lhs == rhs
                }
                Restriction::Quotient => true,
            };
            if !ok {
                return Err(Error::NotMorphism(a, b));
            }
        }
    }
    if kind == Restriction::Quotient {
        let n = src.dim();
        for a in 0..n {
            for b in 0..n {
                let lhs = map.mul_vec(f, src.basis_product(a, b));
                let rhs = target.mul(&map.mul_vec(f, &unit(a, n)), &map.mul_vec(f, &unit(b, n)));
                if lhs != rhs {
                    return Err(Error::NotMorphism(a, b));
                }
            }
        }
    }
    let phi = alg.phi().mul(f, &inj)?;
    let psi = alg.psi().mul(f, &inj)?;
    let w = proj.mul(f, alg.w())?;
    BilinearAlgorithm::new(target.clone(), phi, psi, w, alg.is_symmetric())
}

/// The algebra isomorphism from the canonical `A_p(de, l)` into
/// `A_{p^d}(e, l)` viewed over `F_p` (the layout produced by [`concatenate`]).
pub fn descent_map(p: u32, d: u32, e: u32, l: u32) -> Result<Matrix> {
    let small = FieldTower::new(p)?;
    if small.base().r() != 1 {
        return Err(Error::Precondition("descent needs a prime base field".into()));
    }
    let pd = p.checked_pow(d).ok_or(Error::FieldTooLarge(u32::MAX))?;
    let big_tower = FieldTower::new(pd)?;
    let big = big_tower.base().clone();
    let top = small.ext(d * e);
    let rel = big_tower.ext(e);
    let lifted: Vec<Vec<u32>> = top.modulus().iter().map(|&c| rel.from_base(c)).collect();
    let rho = roots(&rel, &lifted)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("no root of the top modulus in the relative extension".into()))?;
    let (m_top, l) = ((d * e) as usize, l as usize);
    let (d, e) = (d as usize, e as usize);
    let dim = m_top * l;
    let mut cols = Vec::with_capacity(dim);
    for k in 0..l {
        let mut pw = rel.one();
        for _ in 0..m_top {
            let mut col = vec![0; dim];
            for (j, &c) in pw.iter().enumerate() {
                let s = k * e + j;
                for (dg, v) in big.digits(c).into_iter().enumerate() {
                    col[s * d + dg] = v;
                }
            }
            cols.push(col);
            pw = rel.mul(&pw, &rho);
        }
    }
    Ok(Matrix::from_cols(&cols, dim))
}

/// Turns an algorithm for `A_{p^d}(e, l)` over `F_{p^d}` and one for
/// `F_{p^d}` over `F_p` into an algorithm for the canonical `A_p(de, l)`.
pub fn descend(outer: &BilinearAlgorithm, inner: &BilinearAlgorithm, e: u32, l: u32) -> Result<BilinearAlgorithm> {
    let p = outer.base().p();
    let d = outer.dim() as u32;
    let cat = concatenate(outer, inner)?;
    let target = TruncatedAlgebra::new(&FieldTower::new(p)?, d * e, l)?.structure();
    restrict(&cat, &descent_map(p, d, e, l)?, &target, Restriction::Subalgebra)
}
