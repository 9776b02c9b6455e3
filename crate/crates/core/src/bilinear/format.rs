//! The line-oriented algorithm interchange format.
//!
//! ```text
//! BILALG v1 q=<q> dim=<d> n=<n> sym=<0|1>
//! UNITY <d entries> | UNITY -
//! STRUCT
//! <d^2 lines: coordinates of e_i e_j, row i*d+j>
//! PHI
//! <n lines of d entries>
//! PSI
//! <n lines of d entries>
//! W
//! <d lines of n entries>
//! END
//! ```
//!
//! An entry is an element of `F_q`, written as its prime-field digits
//! (lowest first) joined by `.` when `q` is not prime.

use std::fmt::Write as _;

use crate::algebra::{Fq, Matrix, StructureAlgebra};
use crate::error::{Error, Result};

use super::algorithm::BilinearAlgorithm;

fn entry(f: &Fq, v: u32, out: &mut String) {
    if f.r() == 1 {
        write!(out, "{v}").unwrap();
    } else {
        let ds: Vec<String> = f.digits(v).iter().map(|d| d.to_string()).collect();
        out.push_str(&ds.join("."));
    }
}

fn row_line(f: &Fq, row: &[u32], out: &mut String) {
    for (i, &v) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        entry(f, v, out);
    }
    out.push('\n');
}

pub fn write_algorithm(alg: &BilinearAlgorithm) -> String {
    let f = alg.base();
    let d = alg.dim();
    let mut out = String::new();
    writeln!(out, "BILALG v1 q={} dim={} n={} sym={}", f.q(), d, alg.len(), alg.is_symmetric() as u8).unwrap();
    match alg.algebra().unity() {
        Some(u) => {
            out.push_str("UNITY ");
            row_line(f, u, &mut out);
        }
        None => out.push_str("UNITY -\n"),
    }
    out.push_str("STRUCT\n");
    for i in 0..d {
        for j in 0..d {
            row_line(f, alg.algebra().basis_product(i, j), &mut out);
        }
    }
    for (name, m) in [("PHI", alg.phi()), ("PSI", alg.psi()), ("W", alg.w())] {
        out.push_str(name);
        out.push('\n');
        for i in 0..m.rows() {
            row_line(f, m.row(i), &mut out);
        }
    }
    out.push_str("END\n");
    out
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        loop {
            match self.it.next() {
                Some((i, l)) => {
                    self.line = i + 1;
                    let l = l.trim();
                    if !l.is_empty() && !l.starts_with('#') {
                        return Ok(l);
                    }
                }
                None => return Err(self.err("unexpected end of input")),
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }

    fn expect(&mut self, tag: &str) -> Result<()> {
        let l = self.next()?;
        if l != tag {
            return Err(self.err(format!("expected {tag}, found {l:?}")));
        }
        Ok(())
    }
}

fn parse_entry(f: &Fq, tok: &str, lines: &Lines) -> Result<u32> {
    let parts: Vec<&str> = tok.split('.').collect();
    if parts.len() != f.r() as usize {
        return Err(lines.err(format!("entry {tok:?} needs {} digits", f.r())));
    }
    let mut digits = Vec::with_capacity(parts.len());
    for p in parts {
        let d: u32 = p.parse().map_err(|_| lines.err(format!("bad digit {p:?}")))?;
        if d >= f.p() {
            return Err(lines.err(format!("digit {d} out of range for p = {}", f.p())));
        }
        digits.push(d);
    }
    Ok(f.from_digits(&digits))
}

fn parse_row(f: &Fq, line: &str, len: usize, lines: &Lines) -> Result<Vec<u32>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != len {
        return Err(lines.err(format!("expected {len} entries, found {}", toks.len())));
    }
    toks.iter().map(|t| parse_entry(f, t, lines)).collect()
}

fn parse_block(f: &Fq, lines: &mut Lines, tag: &str, rows: usize, cols: usize) -> Result<Matrix> {
    lines.expect(tag)?;
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let l = lines.next()?;
        data.push(parse_row(f, l, cols, lines)?);
    }
    Ok(Matrix::from_rows_with_cols(&data, cols))
}

pub fn parse_algorithm(text: &str) -> Result<BilinearAlgorithm> {
    let mut lines = Lines { it: text.lines().enumerate(), line: 0 };
    let header = lines.next()?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("BILALG") || toks.next() != Some("v1") {
        return Err(lines.err("missing BILALG v1 header"));
    }
    let mut field = |name: &str| -> Result<usize> {
        let t = toks.next().ok_or_else(|| lines.err(format!("missing {name}=")))?;
        let v = t
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| lines.err(format!("expected {name}=, found {t:?}")))?;
        v.parse().map_err(|_| lines.err(format!("bad value for {name}")))
    };
    let q = field("q")?;
    let d = field("dim")?;
    let n = field("n")?;
    let sym = field("sym")?;
    if sym > 1 {
        return Err(lines.err("sym must be 0 or 1"));
    }
    let f = Fq::new(q as u32).map_err(|e| lines.err(e.to_string()))?;
    let ul = lines.next()?;
    let rest = ul.strip_prefix("UNITY").ok_or_else(|| lines.err("expected UNITY"))?.trim();
    let unity = if rest == "-" { None } else { Some(parse_row(&f, rest, d, &lines)?) };
    let st = parse_block(&f, &mut lines, "STRUCT", d * d, d)?;
    let consts: Vec<u32> = (0..d * d).flat_map(|r| st.row(r).to_vec()).collect();
    let algebra = StructureAlgebra::new(f.clone(), d, consts, unity).map_err(|e| lines.err(e.to_string()))?;
    let phi = parse_block(&f, &mut lines, "PHI", n, d)?;
    let psi = parse_block(&f, &mut lines, "PSI", n, d)?;
    let w = parse_block(&f, &mut lines, "W", d, n)?;
    lines.expect("END")?;
    BilinearAlgorithm::new(algebra, phi, psi, w, sym == 1).map_err(|e| lines.err(e.to_string()))
}

/// Structure constants alone: an optional `UNITY` line, then `d^2` rows
/// of `d` entries in the `STRUCT` layout.
pub fn parse_constants(q: u32, d: usize, text: &str) -> Result<StructureAlgebra> {
    let f = Fq::new(q)?;
    let mut lines = Lines { it: text.lines().enumerate(), line: 0 };
    let mut unity = None;
    let mut data = Vec::with_capacity(d * d);
    while data.len() < d * d {
        let l = lines.next()?;
        if let Some(rest) = l.strip_prefix("UNITY") {
            if !data.is_empty() || unity.is_some() {
                return Err(lines.err("UNITY must come first"));
            }
            unity = Some(parse_row(&f, rest.trim(), d, &lines)?);
            continue;
        }
        data.push(parse_row(&f, l, d, &lines)?);
    }
    if let Ok(extra) = lines.next() {
        return Err(lines.err(format!("trailing input {extra:?}")));
    }
    StructureAlgebra::new(f, d, data.concat(), unity).map_err(|e| lines.err(e.to_string()))
}

pub fn write_constants(a: &StructureAlgebra) -> String {
    let f = a.base();
    let mut out = String::new();
    if let Some(u) = a.unity() {
        out.push_str("UNITY ");
        row_line(f, u, &mut out);
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            row_line(f, a.basis_product(i, j), &mut out);
        }
    }
    out
}
