use bilin::algebra::{FieldTower, Fq, Matrix, StructureAlgebra, TruncatedAlgebra};
use bilin::bilinear::combinators::{direct_sum_all, field_as_algebra};
use bilin::bilinear::*;
use bilin::Error;

fn f8_fixture() -> BilinearAlgorithm {
    let tower = FieldTower::new(2).unwrap();
    let alg = TruncatedAlgebra::new(&tower, 3, 1).unwrap().structure();
    let phi = Matrix::from_rows(&[
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![1, 1, 0],
        vec![1, 0, 1],
        vec![0, 1, 1],
    ]);
    let w = Matrix::from_rows(&[
        vec![1, 1, 1, 0, 0, 1],
        vec![1, 0, 0, 1, 0, 1],
        vec![1, 1, 0, 0, 1, 0],
    ]);
    BilinearAlgorithm::symmetric(alg, phi, w).unwrap()
}

fn asym_gap_algebra() -> StructureAlgebra {
    let mut c = vec![0; 8];
    c[(0 * 2 + 1) * 2] = 1;
    c[(1 * 2 + 0) * 2] = 1;
    StructureAlgebra::new(Fq::new(2).unwrap(), 2, c, None).unwrap()
}

fn trunc(q: u32, m: u32, l: u32) -> StructureAlgebra {
    TruncatedAlgebra::new(&FieldTower::new(q).unwrap(), m, l).unwrap().structure()
}

/// Every pair of inputs, for small algebras.
fn full_check(alg: &BilinearAlgorithm) {
    let a = alg.algebra();
    let total = (alg.q() as u64).pow(alg.dim() as u32);
    assert!(total <= 1 << 8);
    for x in 0..total {
        for y in 0..total {
            let (vx, vy) = (a.index_to_vec(x), a.index_to_vec(y));
            assert_eq!(alg.apply(&vx, &vy), a.mul(&vx, &vy));
        }
    }
}

#[test]
fn f8_fixture_verifies() {
    let alg = f8_fixture();
    assert_eq!(alg.verify(), Verdict::Verified);
    assert_eq!(alg.len(), 6);
    assert!(alg.is_symmetric());
    full_check(&alg);
}

#[test]
fn zeroed_w_fails_at_first_pair() {
    let alg = f8_fixture();
    let bad = BilinearAlgorithm::new(alg.algebra().clone(), alg.phi().clone(), alg.psi().clone(), Matrix::zeros(3, 6), true)
        .unwrap();
    assert_eq!(bad.verify(), Verdict::Fails(0, 0));
}

#[test]
fn dimension_mismatch_rejected() {
    let alg = f8_fixture();
    let r = BilinearAlgorithm::new(alg.algebra().clone(), Matrix::zeros(6, 2), Matrix::zeros(6, 2), Matrix::zeros(3, 6), false);
    assert!(matches!(r, Err(Error::Dimension(_))));
}

#[test]
fn naive_symmetric_lengths() {
    let base = naive_symmetric(&StructureAlgebra::base_field(Fq::new(5).unwrap())).unwrap();
    assert_eq!(base.len(), 1);
    let f4 = naive_symmetric(&trunc(2, 2, 1)).unwrap();
    assert_eq!((f4.len(), f4.verify()), (3, Verdict::Verified));
    let a213 = naive_symmetric(&trunc(2, 1, 3)).unwrap();
    assert_eq!((a213.len(), a213.verify()), (6, Verdict::Verified));
    full_check(&a213);
    assert_eq!(naive_symmetric(&asym_gap_algebra()).unwrap().verify(), Verdict::Verified);
}

/// An asymmetric algorithm: naive symmetric one with psi perturbed on the
/// zero-weight part plus the schoolbook algorithm.
fn schoolbook(a: &StructureAlgebra) -> BilinearAlgorithm {
    let d = a.dim();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    let mut ws = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut x = vec![0; d];
            x[i] = 1;
            let mut y = vec![0; d];
            y[j] = 1;
            phi.push(x);
            psi.push(y);
            ws.push(a.basis_product(i, j).to_vec());
        }
    }
    BilinearAlgorithm::new(a.clone(), Matrix::from_rows(&phi), Matrix::from_rows(&psi), Matrix::from_cols(&ws, d), false)
        .unwrap()
}

#[test]
fn symmetrize_rules() {
    let a = trunc(7, 2, 2);
    let asym = schoolbook(&a);
    assert_eq!(asym.verify(), Verdict::Verified);
    let s = symmetrize(&asym).unwrap();
    assert!(s.is_symmetric());
    assert!(s.len() <= 2 * asym.len());
    assert_eq!(s.verify(), Verdict::Verified);

    let sym = naive_symmetric(&a).unwrap();
    assert_eq!(symmetrize(&sym).unwrap().len(), sym.len());
    assert_eq!(symmetrize(&schoolbook(&trunc(2, 2, 1))).unwrap_err(), Error::CharacteristicTwo);
}

#[test]
fn direct_sum_and_tensor_lengths() {
    let f2 = Fq::new(2).unwrap();
    let a = identity(&f2);
    let b = naive_symmetric(&trunc(2, 2, 1)).unwrap();
    let s = direct_sum(&a, &b).unwrap();
    assert_eq!((s.len(), s.dim(), s.verify()), (4, 3, Verdict::Verified));
    full_check(&s);

    let zero = direct_sum_all(&f2, &[]).unwrap();
    let same = direct_sum(&b, &zero).unwrap();
    assert_eq!(same.len(), b.len());
    assert_eq!(same.phi(), b.phi());

    let f7 = Fq::new(7).unwrap();
    let one = identity(&f7);
    let copies = vec![&one; 7];
    let seven = direct_sum_all(&f7, &copies).unwrap();
    assert_eq!((seven.len(), seven.verify()), (7, Verdict::Verified));

    let c = naive_symmetric(&trunc(2, 1, 2)).unwrap();
    let t = tensor_product(&b, &c).unwrap();
    assert_eq!((t.len(), t.dim(), t.verify()), (9, 4, Verdict::Verified));
    assert!(t.is_symmetric());
    let tb = tensor_product(&b, &identity(&f2)).unwrap();
    assert_eq!(tb.len(), b.len());
    assert_eq!(tb.verify(), Verdict::Verified);
    assert!(matches!(direct_sum(&b, &one), Err(Error::BaseMismatch(_))));
}

#[test]
fn restrict_to_quotient_and_subfield() {
    let tower = FieldTower::new(3).unwrap();
    let a = TruncatedAlgebra::new(&tower, 2, 2).unwrap().structure();
    let alg = naive_symmetric(&a).unwrap();
    // t -> 0
    let mut pi = Matrix::zeros(2, 4);
    pi.set(0, 0, 1);
    pi.set(1, 1, 1);
    let field = trunc(3, 2, 1);
    let r = restrict(&alg, &pi, &field, Restriction::Quotient).unwrap();
    assert_eq!((r.len(), r.verify()), (alg.len(), Verdict::Verified));
    let id = restrict(&alg, &Matrix::identity(4), &a, Restriction::Subalgebra).unwrap();
    assert_eq!(id.phi(), alg.phi());
    // a non-morphism is caught
    let mut bad = Matrix::zeros(2, 4);
    bad.set(0, 0, 1);
    bad.set(1, 2, 1);
    assert!(matches!(restrict(&alg, &bad, &field, Restriction::Quotient), Err(Error::NotMorphism(..))));
}

#[test]
fn subfield_f4_in_f16() {
    use bilin::algebra::{Embedding, Field};
    let tower = FieldTower::new(2).unwrap();
    let (f4, f16) = (tower.ext(2), tower.ext(4));
    let emb = Embedding::new(&f4, &f16).unwrap();
    let map = Matrix::from_cols(&[emb.apply(&f4.one()), emb.apply(&f4.gen())], 4);
    let alg16 = naive_symmetric(&trunc(2, 4, 1)).unwrap();
    let r = restrict(&alg16, &map, &trunc(2, 2, 1), Restriction::Subalgebra).unwrap();
    assert_eq!((r.len(), r.verify()), (10, Verdict::Verified));
}

#[test]
fn concatenate_identity_outer() {
    let f3 = Fq::new(3).unwrap();
    let inner = naive_symmetric(&trunc(3, 1, 2)).unwrap();
    let c = concatenate(&identity(&f3), &inner).unwrap();
    assert_eq!(c.len(), inner.len());
    assert_eq!(c.verify(), Verdict::Verified);
    assert_eq!(c.phi(), inner.phi());
}

#[test]
fn concatenate_and_descend() {
    // F_9 over F_3 (length 3) with A_9(2,1) naive (length 3) gives F_81 over F_3
    let outer = naive_symmetric(&field_as_algebra(&Fq::new(9).unwrap()).unwrap()).unwrap();
    let inner_alg = TruncatedAlgebra::new(&FieldTower::new(9).unwrap(), 2, 1).unwrap().structure();
    let inner = naive_symmetric(&inner_alg).unwrap();
    let c = concatenate(&outer, &inner).unwrap();
    assert_eq!((c.len(), c.verify()), (9, Verdict::Verified));
    assert!(c.is_symmetric());
    let d = descend(&outer, &inner, 2, 1).unwrap();
    assert_eq!((d.len(), d.verify()), (9, Verdict::Verified));
    assert_eq!(d.algebra(), &trunc(3, 4, 1));
}

#[test]
fn brute_force_examples() {
    let rem = asym_gap_algebra();
    assert_eq!(brute_force_rank(&rem, 4, false).unwrap(), RankResult::Exact(2));
    assert_eq!(brute_force_rank(&rem, 4, true).unwrap(), RankResult::Exact(3));
    assert_eq!(brute_force_rank(&trunc(2, 2, 1), 4, false).unwrap(), RankResult::Exact(3));
    assert_eq!(brute_force_rank(&trunc(5, 1, 1), 4, false).unwrap(), RankResult::Exact(1));
    assert_eq!(brute_force_rank(&trunc(2, 1, 3), 6, false).unwrap(), RankResult::Exact(5));
    assert_eq!(brute_force_rank(&trunc(2, 1, 3), 4, false).unwrap(), RankResult::ExceedsCap(4));
    assert!(matches!(brute_force_rank(&trunc(2, 3, 3), 9, false), Err(Error::SearchTooLarge(_))));
}

#[test]
fn brute_force_witnesses_are_optimal() {
    let cases = [(asym_gap_algebra(), false, 2), (asym_gap_algebra(), true, 3), (trunc(2, 2, 1), true, 3), (trunc(2, 1, 3), false, 5), (trunc(3, 1, 2), true, 3)];
    for (a, sym, r) in cases {
        let w = brute_force_witness(&a, 6, sym).unwrap().unwrap();
        assert_eq!((w.len(), w.is_symmetric(), w.verify()), (r, sym, Verdict::Verified));
    }
    assert!(brute_force_witness(&trunc(2, 1, 3), 4, false).unwrap().is_none());
}

#[test]
fn rank_sandwich_on_small_algebras() {
    for (q, m, l) in [(2, 1, 2), (2, 2, 1), (3, 1, 2), (3, 2, 1), (2, 3, 1), (2, 1, 3), (3, 1, 3)] {
        let a = trunc(q, m, l);
        let upper = naive_symmetric(&a).unwrap().len();
        let RankResult::Exact(r) = brute_force_rank(&a, upper, false).unwrap() else { panic!() };
        assert!(r >= lower_bounds(&a), "({q},{m},{l})");
        assert!(r <= upper);
    }
}

#[test]
fn lower_bound_cases() {
    assert_eq!(lower_bounds(&trunc(5, 3, 1)), 5);
    assert_eq!(lower_bounds(&trunc(5, 2, 2)), 4);
    assert_eq!(lower_bounds(&asym_gap_algebra()), 0);
}

#[test]
fn intersecting_codes() {
    let f2 = Fq::new(2).unwrap();
    let alg = f8_fixture();
    let (a, b) = codes(&alg);
    assert!(mutually_intersecting(&f2, &a, &b).unwrap());
    // a zero term does not change anything
    let mut phi_rows: Vec<Vec<u32>> = (0..6).map(|i| alg.phi().row(i).to_vec()).collect();
    phi_rows.push(vec![0, 0, 0]);
    let phi = Matrix::from_rows(&phi_rows);
    let mut wcols: Vec<Vec<u32>> = (0..6).map(|i| alg.w().col(i)).collect();
    wcols.push(vec![0, 0, 0]);
    let padded = BilinearAlgorithm::symmetric(alg.algebra().clone(), phi, Matrix::from_cols(&wcols, 3)).unwrap();
    assert_eq!(padded.verify(), Verdict::Verified);
    let (a, b) = codes(&padded);
    assert!(mutually_intersecting(&f2, &a, &b).unwrap());
    let rep = Matrix::from_rows(&[vec![1, 1, 1]]);
    assert!(mutually_intersecting(&f2, &rep, &rep).unwrap());
    let split = Matrix::from_rows(&[vec![1, 0], vec![0, 1]]);
    assert!(!mutually_intersecting(&f2, &split, &split).unwrap());
}

#[test]
fn s3_witness() {
    let f4 = Fq::new(4).unwrap();
    let (x, y) = s3_counterexample_witness();
    assert_eq!((x, y), (f4.generator(), 1));
    assert!(rank::s3_differs(&f4, x, y));
    for x in 0..4 {
        assert!(!rank::s3_differs(&f4, x, x));
    }
    let count = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|&(x, y)| rank::s3_differs(&f4, x, y)).count();
    assert!(count >= 1);
}

#[test]
fn interchange_round_trip_and_rejects() {
    let alg = f8_fixture();
    let text = write_algorithm(&alg);
    assert_eq!(parse_algorithm(&text).unwrap(), alg);
    let a9 = naive_symmetric(&trunc(9, 1, 2)).unwrap();
    let t9 = write_algorithm(&a9);
    assert!(t9.contains('.'));
    assert_eq!(parse_algorithm(&t9).unwrap(), a9);
    assert!(parse_algorithm(&text.replace("n=6", "n=5")).is_err());
    assert!(parse_algorithm(&text.replacen("1 1 1 0 0 1", "1 2 1 0 0 1", 1)).is_err());
    assert!(parse_algorithm("garbage").is_err());
    assert!(parse_algorithm("").is_err());
}
