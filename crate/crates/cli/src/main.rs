//! Command-line front end.
//!
//! Exit codes: 0 success or a verdict that holds, 2 a verdict or law that
//! fails (the witness is on standard output), 3 divergence of the IVP
//! solver, 4 malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use spectral_steps::galois::{adjunction_check, fuzz_adjunction};
use spectral_steps::ivp::{
    convergence, enclosure_csv, enclosure_width, solve_fixpoint, IvpProblem, ProblemFile,
};
use spectral_steps::lattice_duality::{roundtrip, FinDistLattice, LatticeFile};
use spectral_steps::rational::to_f64;
use spectral_steps::step_functions::{
    order, way_below_verdict, Caps, OrderStrategy, StepFn, WayBelowStrategy,
};
use spectral_steps::{format_rational, parse_rational, Error, Width};

#[derive(Parser)]
#[command(
    name = "spectral",
    version,
    about = "Step functions, finite duality and validated Euler enclosures"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest generated lattice the prime-filter procedures may build.
    #[arg(long, global = true, default_value_t = spectral_steps::lattice_duality::DEFAULT_LATTICE_CAP)]
    cap_lattice: usize,
    /// Most components the subset formula may enumerate over.
    #[arg(long, global = true, default_value_t = spectral_steps::step_functions::DEFAULT_SUBSET_CAP)]
    cap_subsets: usize,
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Finite Stone duality.
    #[command(subcommand)]
    Duality(DualityCmd),
    /// Step functions: evaluation, order and way-below.
    #[command(subcommand)]
    Stepfn(StepfnCmd),
    /// The restriction/envelope adjunction.
    #[command(subcommand)]
    Galois(GaloisCmd),
    /// Validated Euler enclosures.
    #[command(subcommand)]
    Ivp(IvpCmd),
}

#[derive(Subcommand)]
enum DualityCmd {
    /// Checks that a lattice is isomorphic to the opens of its point space.
    Roundtrip {
        #[arg(long)]
        lattice: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Spectral,
    Absbasis,
    Cells,
    Primefilters,
}

#[derive(Subcommand)]
enum StepfnCmd {
    /// Value of `lhs` at a point.
    Eval {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Decides `lhs ⊑ rhs` (strategies: cells, primefilters).
    Order {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, value_enum, default_value = "cells")]
        strategy: Strategy,
    },
    /// Decides `lhs ≪ rhs` (strategies: spectral, absbasis).
    Waybelow {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, value_enum, default_value = "absbasis")]
        strategy: Strategy,
    },
}

#[derive(Subcommand)]
enum GaloisCmd {
    /// Evaluates both sides of the adjunction for one pair.
    Check {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Runs the randomized law suite.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum IvpCmd {
    /// Fixpoint enclosure on a uniform partition, as CSV.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        pieces: usize,
    },
    /// Widths for successively doubled partitions.
    Convergence {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Pieces at the first level.
        #[arg(long, default_value_t = 4)]
        base: usize,
    },
}

enum Failure {
    Input(String),
    Diverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DivergenceBound { .. } | Error::NoConvergence { .. } => {
                Failure::Diverged(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Primary output and whether the verdict it reports holds.
struct Report {
    text: String,
    holds: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, holds: true }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn width_text(w: &Width) -> String {
    match w {
        Width::Finite(x) => format_rational(x),
        Width::Infinite => "inf".into(),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    let caps = Caps {
        lattice: g.cap_lattice,
        subsets: g.cap_subsets,
    };
    match &cli.command {
        Command::Duality(DualityCmd::Roundtrip { lattice }) => {
            let file: LatticeFile = read_json(lattice)?;
            let l = FinDistLattice::try_from(file)?;
            let rt = roundtrip(&l)?;
            let holds = rt.isomorphic;
            Ok(Report {
                text: serde_json::to_string(&rt).expect("serializable"),
                holds,
            })
        }
        Command::Stepfn(StepfnCmd::Eval { lhs, at }) => {
            let f: StepFn = read_json(lhs)?;
            let x = parse_rational(at)?;
            let v = f.eval(&x)?;
            Ok(Report::ok(
                json!({"at": format_rational(&x), "value": v}).to_string(),
            ))
        }
        Command::Stepfn(StepfnCmd::Order { lhs, rhs, strategy }) => {
            let strat = match strategy {
                Strategy::Cells => OrderStrategy::Cells,
                Strategy::Primefilters => OrderStrategy::PrimeFilters,
                _ => {
                    return Err(Failure::Input(
                        "order takes --strategy cells or primefilters".into(),
                    ))
                }
            };
            let (f, h): (StepFn, StepFn) = (read_json(lhs)?, read_json(rhs)?);
            let v = order(&f, &h, strat, &caps)?;
            Ok(Report {
                holds: v.holds,
                text: json!({"relation": "order", "holds": v.holds, "witness": v.witness})
                    .to_string(),
            })
        }
        Command::Stepfn(StepfnCmd::Waybelow { lhs, rhs, strategy }) => {
            let strat = match strategy {
                Strategy::Spectral => WayBelowStrategy::Spectral,
                Strategy::Absbasis => WayBelowStrategy::AbsBasis,
                _ => {
                    return Err(Failure::Input(
                        "waybelow takes --strategy spectral or absbasis".into(),
                    ))
                }
            };
            let (f, h): (StepFn, StepFn) = (read_json(lhs)?, read_json(rhs)?);
            let v = way_below_verdict(&f, &h, strat, &caps)?;
            Ok(Report {
                holds: v.holds,
                text: json!({"relation": "waybelow", "holds": v.holds, "witness": v.witness})
                    .to_string(),
            })
        }
        Command::Galois(GaloisCmd::Check { f, g }) => {
            let (f, h): (StepFn, StepFn) = (read_json(f)?, read_json(g)?);
            let v = adjunction_check(&f, &h)?;
            Ok(Report {
                holds: v.agree,
                text: serde_json::to_string(&v).expect("serializable"),
            })
        }
        Command::Galois(GaloisCmd::Fuzz { n }) => {
            let report = fuzz_adjunction(*n, g.seed)?;
            Ok(Report {
                holds: report.all_agree(),
                text: serde_json::to_string(&report).expect("serializable"),
            })
        }
        Command::Ivp(IvpCmd::Solve { problem, pieces }) => {
            let p = IvpProblem::try_from(read_json::<ProblemFile>(problem)?)?;
            if *pieces == 0 {
                return Err(Failure::Input("--pieces must be positive".into()));
            }
            let (enc, iterations) = solve_fixpoint(&p, *pieces)?;
            eprintln!(
                "fixpoint after {iterations} iterations, width {}",
                width_text(&enclosure_width(&enc))
            );
            Ok(Report::ok(enclosure_csv(&enc)))
        }
        Command::Ivp(IvpCmd::Convergence {
            problem,
            levels,
            base,
        }) => {
            let p = IvpProblem::try_from(read_json::<ProblemFile>(problem)?)?;
            if *base == 0 || *levels == 0 || *levels > 16 {
                return Err(Failure::Input(
                    "--base must be positive and --levels in 1..=16".into(),
                ));
            }
            let mut text = String::from("k,width,width_approx,ratio,ratio_approx\n");
            for level in convergence(&p, *base, *levels)? {
                let approx = match &level.width {
                    Width::Finite(w) => format!("{:.6e}", to_f64(w)),
                    Width::Infinite => "inf".into(),
                };
                let (ratio, ratio_approx) = match &level.ratio {
                    Some(r) => (format_rational(r), format!("{:.6}", to_f64(r))),
                    None => (String::new(), String::new()),
                };
                text.push_str(&format!(
                    "{},{},{approx},{ratio},{ratio_approx}\n",
                    level.pieces,
                    width_text(&level.width)
                ));
            }
            Ok(Report::ok(text))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&report.text, cli.global.out.as_deref()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(4);
            }
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Diverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
