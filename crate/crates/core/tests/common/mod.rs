//! Random configurations shared by the synthesis and acceptance suites.
#![allow(dead_code)]

use bilin::curve::elliptic::curve_with_trace;
use bilin::curve::p1::ProjectiveLine;
use bilin::curve::{ClosedPoint, Curve, Divisor};
use bilin::synthesis::{check_conditions, InterpolationPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pick<T: Clone>(rng: &mut ChaCha8Rng, v: &[T]) -> T {
    v[rng.gen_range(0..v.len())].clone()
}

/// A random plan near the critical degrees; `check_conditions` errors if
/// the divisor and matrix verdicts disagree. Returns (injective, surjective).
fn trial<C: Curve + Clone>(curve: &C, rng: &mut ChaCha8Rng) -> (bool, bool) {
    let genus = curve.genus() as i64;
    let m = rng.gen_range(1..=2u32);
    let l = rng.gen_range(1..=3u32);
    let q = pick(rng, &curve.points_of_degree(m, 50).unwrap());
    let mut pool: Vec<C::Point> = curve.points_of_degree(1, 50).unwrap();
    pool.extend(curve.points_of_degree(2, 20).unwrap());
    pool.retain(|p| *p != q);
    let rational: Vec<C::Point> = pool.iter().filter(|p| p.degree() == 1).cloned().collect();
    let ml = (m * l) as i64;
    let rand_div = |rng: &mut ChaCha8Rng| {
        let target = ml + genus - 2 + rng.gen_range(0..=3);
        let p = pick(rng, &rational);
        let extra = pick(rng, &pool);
        let mut d = Divisor::from_terms([(extra, rng.gen_range(-1..=1i64))]);
        if rng.gen_bool(0.3) {
            d.add_point(q.clone(), rng.gen_range(-1..=1));
        }
        d.add_point(p, target - d.degree());
        d
    };
    let d1 = rand_div(rng);
    let d2 = if rng.gen_bool(0.3) { d1.clone() } else { rand_div(rng) };
    let want = d1.degree() + d2.degree() + rng.gen_range(-1..=2);
    let mut order = pool.clone();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut g: Vec<(C::Point, u32)> = Vec::new();
    let mut deg = 0i64;
    for p in order {
        if deg >= want {
            break;
        }
        let u = rng.gen_range(1..=2u32);
        deg += (p.degree() * u) as i64;
        g.push((p, u));
    }
    let plan = InterpolationPlan { curve: curve.clone(), m, l, q_point: q, g, d1, d2, inner: vec![] };
    let rep = check_conditions(&plan).unwrap();
    (rep.injective, rep.surjective.iter().all(|&s| s))
}

/// `n` random plans alternating between lines and elliptic curves.
/// Counts `[not injective, injective, not surjective, surjective]`.
pub fn condition_trials(n: usize, seed: u64) -> [usize; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines: Vec<ProjectiveLine> = [2, 3, 4, 5, 7].iter().map(|&q| ProjectiveLine::new(q).unwrap()).collect();
    let curves = [(3, -2), (4, -3), (5, -2), (7, 0)].map(|(q, t)| curve_with_trace(q, t).unwrap());
    let mut seen = [0usize; 4];
    for i in 0..n {
        let (inj, surj) =
            if i % 2 == 0 { trial(&lines[i / 2 % lines.len()], &mut rng) } else { trial(&curves[i / 2 % curves.len()], &mut rng) };
        seen[inj as usize] += 1;
        seen[2 + surj as usize] += 1;
    }
    seen
}

/// `l(D) - i(D) = deg D + 1 - g` and `l(D)` equals the basis size, on
/// `n` random divisors of one curve.
pub fn riemann_roch_identity<C: Curve>(curve: &C, n: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<C::Point> = curve.points_of_degree(1, 20).unwrap();
    pool.extend(curve.points_of_degree(2, 10).unwrap());
    pool.extend(curve.points_of_degree(3, 5).unwrap());
    let g = curve.genus() as i64;
    for _ in 0..n {
        let mut d = Divisor::zero();
        for _ in 0..rng.gen_range(1..5) {
            d.add_point(pick(&mut rng, &pool), rng.gen_range(-2..=4));
        }
        let (l, i) = (curve.l_dim(&d) as i64, curve.i_dim(&d) as i64);
        assert_eq!(l - i, d.degree() + 1 - g, "{d:?}");
        assert_eq!(curve.rr_basis(&d).unwrap().len() as i64, l);
    }
    n
}
