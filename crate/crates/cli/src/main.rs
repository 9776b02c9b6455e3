use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bilin::bilinear::{brute_force_rank, parse_algorithm, parse_constants, write_algorithm, RankResult, Verdict};
use bilin::bounds::export::{to_tsv, write_bundle};
use bilin::bounds::{describe_g, reproduce_fixture, BoundTable, TableOptions};
use bilin::curve::elliptic::curves_by_trace;
use bilin::curve::p1::ProjectiveLine;
use bilin::synthesis::{assemble, genus0_plan, genus1_plan, write_plan, Case, InterpolationPlan, Selection, TextCurve};
use bilin::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bilin", version, about = "Bilinear multiplication algorithms over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an algorithm for F_{q^m}[t]/(t^l) over F_q.
    Synth {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        l: u32,
        /// Interpolate on P^1 (0) or an elliptic curve (1); default: best table entry.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
        genus: Option<u32>,
        /// Divisor selection on the elliptic curve; default: best of all cases.
        #[arg(long, value_parser = ["a", "b", "c", "d"], requires = "genus")]
        case: Option<String>,
        #[arg(long)]
        sym: bool,
        /// Write the algorithm here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the interpolation plan as text.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check an algorithm file on all basis pairs.
    Verify { file: PathBuf },
    /// Exact rank of the multiplication tensor of an algebra.
    Rank {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        dim: usize,
        /// Structure constants: d^2 rows of d entries, optional UNITY line first.
        #[arg(long)]
        constants: PathBuf,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        sym: bool,
    },
    /// Fill the bound table for F_q up to ml = max-ml.
    Table {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        max_ml: u32,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Run a named reproduction.
    Fixture { name: String },
}

/// Exit codes.
const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const EXHAUSTED: u8 = 3;

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Exhausted(_)
            | Error::InsufficientPoints(_)
            | Error::NoCurve { .. }
            | Error::NoPoint(_)
            | Error::SearchTooLarge(_) => EXHAUSTED,
            Error::Internal(_) | Error::NotMorphism(..) => VERIFY_FAILED,
            _ => USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(USAGE, format!("{}: {e}", path.display())))
}

fn synth(
    q: u32,
    m: u32,
    l: u32,
    genus: Option<u32>,
    case: Option<&str>,
    sym: bool,
    seed: u64,
) -> Result<(bilin::bilinear::BilinearAlgorithm, Option<String>, String), Failure> {
    let mut table = BoundTable::new(TableOptions { seed, ..TableOptions::default() });
    match genus {
        None => {
            let c = table.improve(q, m, l, sym)?;
            Ok(((*c.witness).clone(), None, format!("{}: {}", c.strategy, c.recipe)))
        }
        Some(0) => {
            let line = ProjectiveLine::new(q)?;
            let plan = genus0_plan(&line, m, l, &mut table.provider(q), sym)?;
            let alg = assemble(&plan)?;
            Ok((alg, Some(write_plan(&plan)), format!("genus 0, G = {}", describe_g(&plan))))
        }
        Some(_) => {
            let cases: Vec<Case> = match case {
                Some(c) => vec![Case::parse(c).ok_or_else(|| Failure(USAGE, format!("unknown case {c}")))?],
                None => Case::ALL.to_vec(),
            };
            let mut best: Option<(InterpolationPlan<_>, i64, Case)> = None;
            let mut last = Error::Exhausted(format!("no elliptic curve over F_{q} gave a plan"));
            for (t, curve) in curves_by_trace(q)?.iter() {
                for &c in &cases {
                    match genus1_plan(curve, m, l, &mut table.provider(q), Selection::Case(c), sym, seed) {
                        Ok((p, _)) if best.as_ref().is_none_or(|(b, _, _)| p.length() < b.length()) => best = Some((p, *t, c)),
                        Ok(_) => {}
                        Err(e) => last = e,
                    }
                }
            }
            let (plan, t, c) = best.ok_or(last)?;
            let alg = assemble(&plan)?;
            let how = format!("genus 1, {} (t={t}), case {c}, G = {}", plan.curve.literal(), describe_g(&plan));
            Ok((alg, Some(write_plan(&plan)), how))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Synth { q, m, l, genus, case, sym, out, plan, seed } => {
            let (alg, plan_text, how) = synth(q, m, l, genus, case.as_deref(), sym, seed)?;
            eprintln!("{how}");
            if let Some(path) = plan {
                let text = plan_text.ok_or_else(|| Failure(USAGE, "--plan needs --genus".into()))?;
                write(&path, &text)?;
            }
            let text = write_algorithm(&alg);
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    println!("length {}", alg.len());
                }
                None => print!("{text}"),
            }
        }
        Cmd::Verify { file } => {
            let alg = parse_algorithm(&read(&file)?)?;
            match alg.verify() {
                Verdict::Verified => println!("verified q={} dim={} n={} sym={}", alg.q(), alg.dim(), alg.len(), alg.is_symmetric() as u8),
                Verdict::Fails(a, b) => {
                    return Err(Failure(VERIFY_FAILED, format!("product of basis elements {a} and {b} is wrong")));
                }
            }
        }
        Cmd::Rank { q, dim, constants, cap, sym } => {
            let a = parse_constants(q, dim, &read(&constants)?)?;
            match brute_force_rank(&a, cap, sym)? {
                RankResult::Exact(r) => println!("{r}"),
                RankResult::ExceedsCap(c) => {
                    println!(">{c}");
                    return Err(Failure(EXHAUSTED, format!("rank exceeds {c}")));
                }
            }
        }
        Cmd::Table { q, max_ml, export } => {
            let mut table = BoundTable::new(TableOptions::default());
            table.fill(q, max_ml)?;
            print!("{}", to_tsv(&table));
            if let Some(dir) = export {
                write_bundle(&table, &dir).map_err(|e| Failure(USAGE, format!("{}: {e}", dir.display())))?;
            }
        }
        Cmd::Fixture { name } => {
            let mut table = BoundTable::new(TableOptions::default());
            let report = reproduce_fixture(&name, &mut table)?;
            print!("{report}");
            if !report.ok() {
                return Err(Failure(VERIFY_FAILED, format!("fixture {name} did not reproduce")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("bilin: {msg}");
            ExitCode::from(code)
        }
    }
}
