use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use uqt::explorer::{self, InitialState, Predicate, SweepSpec};
use uqt::families::{FamilySpec, CATALOG};
use uqt::oracle::QuadratureSpec;
use uqt::{verify, Result};

/// Exit code when a formula and the quadrature oracle disagree.
const ORACLE_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(name = "uqt", version, about = "Classify qubit channels by universal teleportation usefulness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report, teleportation profile and oracle check for one channel file.
    Analyze {
        channel: PathBuf,
        #[arg(long, default_value = "bell1")]
        initial: InitialState,
        #[arg(long, default_value_t = 64)]
        n_theta: usize,
        #[arg(long, default_value_t = 64)]
        n_phi: usize,
        /// Use Monte Carlo quadrature with this many samples.
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a grid sweep described by a JSON spec and write CSV.
    Sweep {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bisect one parameter for the point where a verdict flips.
    Threshold {
        #[arg(long)]
        family: String,
        #[arg(long)]
        param: String,
        /// `lo,hi`
        #[arg(long, value_parser = parse_bracket)]
        bracket: (f64, f64),
        #[arg(long)]
        predicate: Predicate,
        /// Fixed parameter `name=value`, repeatable.
        #[arg(long = "set", value_parser = parse_assignment)]
        set: Vec<(String, f64)>,
        #[arg(long, default_value = "bell1")]
        initial: InitialState,
        #[arg(long, default_value_t = explorer::DEFAULT_TOL)]
        tol: f64,
    },
    /// Randomized search for non-unital channels keeping a pure state UQT-useful.
    SearchUqt {
        #[arg(long)]
        concurrence: f64,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the family catalog.
    ListFamilies {
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance suite.
    Verify,
}

fn parse_bracket(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_assignment(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    Ok((k.trim().to_string(), v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"))?))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze { channel, initial, n_theta, n_phi, mc_samples, seed } => {
            let q = match mc_samples {
                Some(n) => QuadratureSpec::monte_carlo(n, seed)?,
                None => QuadratureSpec::grid(n_theta, n_phi)?,
            };
            let report = explorer::analyze_file(&channel, &initial, &q)?;
            print_json(&report)?;
            Ok(if report.oracle_disagrees() { ORACLE_DISAGREEMENT } else { 0 })
        }
        Command::Sweep { spec, output } => {
            let spec = SweepSpec::from_json(&std::fs::read_to_string(&spec)?)?;
            let result = explorer::run_sweep(&spec)?;
            match output {
                Some(path) => result.write_csv(File::create(path)?)?,
                None => result.write_csv(io::stdout().lock())?,
            }
            let bad = result.oracle_disagreements();
            if bad > 0 {
                eprintln!("oracle disagreed with the closed form on {bad} rows");
                return Ok(ORACLE_DISAGREEMENT);
            }
            Ok(0)
        }
        Command::Threshold { family, param, bracket, predicate, set, initial, tol } => {
            let mut spec = FamilySpec::new(&family, &[]);
            spec.params.extend(set);
            let r = explorer::find_threshold(&spec, &param, bracket, predicate, &initial, tol)?;
            print_json(&r)?;
            Ok(0)
        }
        Command::SearchUqt { concurrence, budget, seed } => {
            print_json(&explorer::search_uqt(concurrence, budget, seed)?)?;
            Ok(0)
        }
        Command::ListFamilies { json } => {
            if json {
                print_json(&CATALOG)?;
            } else {
                for f in CATALOG {
                    let params: Vec<String> = f.params.iter().map(|p| format!("{} {}", p.name, p.range)).collect();
                    let nature = match f.unital {
                        Some(true) => "unital",
                        Some(false) => "non-unital",
                        None => "either",
                    };
                    println!("{:<30} {:<11} {}", f.id, nature, f.description);
                    if !params.is_empty() {
                        println!("{:<30} {}", "", params.join("; "));
                    }
                }
            }
            Ok(0)
        }
        Command::Verify => {
            let mut failed = 0;
            for outcome in verify::run_all() {
                println!("{}", outcome.line());
                failed += usize::from(!outcome.passed);
            }
            Ok(if failed == 0 { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
