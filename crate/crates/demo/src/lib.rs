//! Browser front end. The `run_*` functions hold the logic and are plain
//! Rust; the exported wrappers only convert errors for JavaScript.

use bilin::bilinear::{parse_algorithm, write_algorithm, Verdict};
use bilin::bounds::{describe_g, BoundTable, TableOptions};
use bilin::curve::p1::ProjectiveLine;
use bilin::synthesis::{assemble, genus0_plan};
use wasm_bindgen::prelude::*;

const MAX_Q: u32 = 64;
const MAX_ML: u32 = 12;

/// Summary line, then the algorithm in the interchange format.
pub fn run_synthesize(q: u32, m: u32, l: u32, genus0: bool) -> Result<String, String> {
    if q > MAX_Q || m * l > MAX_ML || m == 0 || l == 0 {
        return Err(format!("keep q <= {MAX_Q} and 1 <= ml <= {MAX_ML} in the browser"));
    }
    let mut table = BoundTable::new(TableOptions { genus1_max_q: 16, ..TableOptions::default() });
    let (alg, how) = if genus0 {
        let line = ProjectiveLine::new(q).map_err(|e| e.to_string())?;
        let plan = genus0_plan(&line, m, l, &mut table.provider(q), false).map_err(|e| e.to_string())?;
        (assemble(&plan).map_err(|e| e.to_string())?, format!("genus 0, G = {}", describe_g(&plan)))
    } else {
        let c = table.improve(q, m, l, false).map_err(|e| e.to_string())?;
        ((*c.witness).clone(), format!("{}: {}", c.strategy, c.recipe))
    };
    Ok(format!("# length {} ({how})\n{}", alg.len(), write_algorithm(&alg)))
}

pub fn run_verify(text: &str) -> Result<String, String> {
    let alg = parse_algorithm(text).map_err(|e| e.to_string())?;
    Ok(match alg.verify() {
        Verdict::Verified => format!("verified: {} products for dimension {} over F_{}", alg.len(), alg.dim(), alg.q()),
        Verdict::Fails(a, b) => format!("FAILS on basis elements {a} and {b}"),
    })
}

fn parse_vec(s: &str, q: u32, d: usize) -> Result<Vec<u32>, String> {
    let v: Vec<u32> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().map_err(|_| format!("bad entry {t:?}")))
        .collect::<Result<_, _>>()?;
    if v.len() != d || v.iter().any(|&x| x >= q) {
        return Err(format!("need {d} entries below {q}"));
    }
    Ok(v)
}

/// Multiplies `x` and `y` with the algorithm and with the structure
/// constants, and shows both.
pub fn run_multiply(text: &str, x: &str, y: &str) -> Result<String, String> {
    let alg = parse_algorithm(text).map_err(|e| e.to_string())?;
    let (x, y) = (parse_vec(x, alg.q(), alg.dim())?, parse_vec(y, alg.q(), alg.dim())?);
    let got = alg.apply(&x, &y);
    let want = alg.algebra().mul(&x, &y);
    Ok(format!(
        "algorithm ({} multiplications): {got:?}\ndirect product: {want:?}\n{}",
        alg.len(),
        if got == want { "agree" } else { "DISAGREE" }
    ))
}

#[wasm_bindgen]
pub fn synthesize(q: u32, m: u32, l: u32, genus0: bool) -> Result<String, JsValue> {
    run_synthesize(q, m, l, genus0).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify(text: &str) -> Result<String, JsValue> {
    run_verify(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn multiply(text: &str, x: &str, y: &str) -> Result<String, JsValue> {
    run_multiply(text, x, y).map_err(|e| JsValue::from_str(&e))
}
