use std::fs;
use std::sync::Arc;

use bilin::bilinear::{lower_bounds, naive_symmetric, BoundCertificate, Strategy};
use bilin::bounds::export::{replay_bundle, to_tsv, write_bundle};
use bilin::bounds::{reproduce_fixture, BoundTable, Key, TableOptions, FIXTURE_NAMES};

fn table() -> BoundTable {
    BoundTable::new(TableOptions::default())
}

#[test]
fn filled_table_invariants() {
    let mut t = table();
    for q in [2, 3, 4] {
        t.fill(q, 6).unwrap();
    }
    let mut n = 0;
    for (k, c) in t.entries() {
        c.replay().unwrap();
        assert_eq!(c.witness.len(), c.bound, "{k:?}");
        assert!(c.witness.verify().ok());
        let ml = (k.m * k.l) as usize;
        assert!(c.bound >= ml && c.bound >= lower_bounds(c.witness.algebra()));
        if k.l == 1 {
            assert!(c.bound >= 2 * ml - 1, "{k:?}");
        }
        if k.sym {
            assert!(c.witness.is_symmetric());
        } else {
            assert!(c.bound <= t.get(k.q, k.m, k.l, true).unwrap().bound);
        }
        n += 1;
    }
    assert!(n > 40);
    // known small values
    assert_eq!(t.get(2, 2, 1, true).unwrap().bound, 3);
    assert_eq!(t.get(2, 1, 2, true).unwrap().bound, 3);
    assert_eq!(t.get(2, 3, 1, true).unwrap().bound, 6);
    assert_eq!(t.get(3, 2, 1, true).unwrap().bound, 3);
}

#[test]
fn offers_are_monotone() {
    let mut t = table();
    let best = t.improve(2, 1, 3, true).unwrap();
    let key = Key { q: 2, m: 1, l: 3, sym: true };
    let naive = naive_symmetric(best.witness.algebra()).unwrap();
    let worse = BoundCertificate::new(2, 1, 3, Strategy::Naive, "schoolbook", naive);
    assert!(worse.bound > best.bound);
    assert!(!t.offer(key, Arc::new(worse)).unwrap());
    assert_eq!(t.get(2, 1, 3, true).unwrap().bound, best.bound);
    // a certificate for a different key is refused
    assert!(t.offer(Key { q: 2, m: 3, l: 1, sym: true }, best.clone()).is_err());
    for line in t.log() {
        let (_, change) = line.split_once(": ").unwrap();
        let (old, rest) = change.split_once(" -> ").unwrap();
        let new: usize = rest.split_whitespace().next().unwrap().parse().unwrap();
        assert!(old == "-" || old.parse::<usize>().unwrap() > new, "{line}");
    }
}

#[test]
fn bundle_round_trip() {
    let mut t = table();
    t.fill(2, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_bundle(&t, dir.path()).unwrap();
    let tsv = fs::read_to_string(dir.path().join("table.tsv")).unwrap();
    assert_eq!(tsv, to_tsv(&t));
    assert!(tsv.starts_with("q\tm\tl\tsym\tbound\tstrategy\n"));
    assert_eq!(replay_bundle(dir.path()).unwrap(), t.entries().count());

    // a bundle whose row claims a shorter algorithm than the file holds
    let bad = tsv.replacen("2\t2\t1\t1\t3\t", "2\t2\t1\t1\t2\t", 1);
    assert_ne!(bad, tsv);
    fs::write(dir.path().join("table.tsv"), bad).unwrap();
    assert!(replay_bundle(dir.path()).is_err());
}

#[test]
fn genus0_and_descent_entries() {
    let mut t = table();
    let c = t.improve(16, 4, 2, true).unwrap();
    assert_eq!((c.bound, c.strategy), (15, Strategy::Genus0));
    let c = t.improve(2, 4, 2, false).unwrap();
    assert_eq!((c.bound, c.strategy), (24, Strategy::CompositeDescent));
    assert!(c.witness.verify().ok());
}

#[test]
fn table_meets_elliptic_values() {
    let mut t = table();
    for (q, reference) in [(8, 17), (7, 18), (5, 19), (4, 20)] {
        let c = t.improve(q, 4, 2, false).unwrap();
        assert!(c.bound <= reference, "q={q}: {} ({})", c.bound, c.recipe);
        assert!(c.witness.verify().ok());
    }
}

#[test]
fn quick_fixtures() {
    let mut t = table();
    for name in ["f8-plane", "remark-asym-gap", "mu-q-2-2"] {
        let r = reproduce_fixture(name, &mut t).unwrap();
        assert!(r.ok(), "{r}");
    }
    assert!(FIXTURE_NAMES.contains(&"mu3-97"));
    assert!(reproduce_fixture("nope", &mut t).is_err());
}

#[test]
fn mu3_97_with_own_divisor() {
    let mut t = table();
    let r = reproduce_fixture("mu3-97", &mut t).unwrap();
    assert!(r.rows[0].verified, "{r}");
    assert!(r.rows[0].achieved <= 426, "{r}");
}
