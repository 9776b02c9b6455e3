use bilin_demo::{run_multiply, run_synthesize, run_verify};

#[test]
fn synthesize_verify_multiply() {
    let out = run_synthesize(7, 2, 2, true).unwrap();
    assert!(out.starts_with("# length 7 (genus 0"), "{out}");
    assert!(run_verify(&out).unwrap().starts_with("verified: 7 products"));
    let m = run_multiply(&out, "1 2 3 4", "5,6,0,1").unwrap();
    assert!(m.ends_with("agree"), "{m}");
    assert!(run_multiply(&out, "1 2", "1 2 3 4").is_err());
    assert!(run_synthesize(2, 13, 1, false).is_err());
}

#[test]
fn tampered_text_reported() {
    let out = run_synthesize(2, 2, 1, false).unwrap();
    let bad = out.replacen("W\n1", "W\n0", 1);
    assert_ne!(bad, out);
    assert!(run_verify(&bad).unwrap().starts_with("FAILS"));
    assert!(run_verify("nonsense").is_err());
}
