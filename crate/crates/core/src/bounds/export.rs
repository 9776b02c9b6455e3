//! Table export: TSV summary and certificate bundles.

use std::fs;
use std::path::Path;

use crate::bilinear::{parse_algorithm, write_algorithm};
use crate::error::{Error, Result};

use super::table::BoundTable;

/// `q m l sym bound strategy` rows, sorted by key.
pub fn to_tsv(table: &BoundTable) -> String {
    let mut out = String::from("q\tm\tl\tsym\tbound\tstrategy\n");
    for (k, c) in table.entries() {
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\t{}\n", k.q, k.m, k.l, k.sym as u8, c.bound, c.strategy));
    }
    out
}

fn file_stem(q: u32, m: u32, l: u32, sym: bool) -> String {
    format!("{q}_{m}_{l}{}", if sym { "_sym" } else { "" })
}

/// Writes `table.tsv` and one algorithm file per entry into `dir`.
pub fn write_bundle(table: &BoundTable, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("table.tsv"), to_tsv(table))?;
    for (k, c) in table.entries() {
        fs::write(dir.join(format!("{}.alg", file_stem(k.q, k.m, k.l, k.sym))), write_algorithm(&c.witness))?;
    }
    Ok(())
}

/// Re-reads a bundle and checks every algorithm against its row.
pub fn replay_bundle(dir: &Path) -> Result<usize> {
    let io = |e: std::io::Error| Error::Precondition(format!("{}: {e}", dir.display()));
    let tsv = fs::read_to_string(dir.join("table.tsv")).map_err(io)?;
    let mut n = 0;
    for (i, line) in tsv.lines().enumerate().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        let bad = || Error::Parse { line: i + 1, msg: format!("bad row {line:?}") };
        if f.len() != 6 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
        let (q, m, l, sym, bound) = (num(f[0])?, num(f[1])?, num(f[2])?, num(f[3])? == 1, num(f[4])? as usize);
        let text = fs::read_to_string(dir.join(format!("{}.alg", file_stem(q, m, l, sym)))).map_err(io)?;
        let alg = parse_algorithm(&text)?;
        if alg.q() != q || alg.dim() != (m * l) as usize || alg.len() != bound || (sym && !alg.is_symmetric()) {
            return Err(Error::Internal(format!("bundle entry {} does not match its row", file_stem(q, m, l, sym))));
        }
        alg.check()?;
        n += 1;
    }
    Ok(n)
}
