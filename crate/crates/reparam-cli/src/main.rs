//! Command-line front end: validation reports, construction, regularization,
//! evaluation, sampling, and convergence tables over the JSON/CSV document
//! formats.
//!
//! Exit codes: 0 success, 1 validation failure (the report is still
//! printed), 2 malformed input, 3 internal assertion.

mod docs;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use reparam::{
    build_from_stopmap, check_conditions, dyadic_assignment, dyadic_build_with_trace, phi_k,
    regularize, stop_data_of_reparam, sup_distance, ConstructError, Enumeration, Rational,
    StopFamily,
};

use docs::{
    load_family, load_path_or_reparam, load_plpath, load_reparam, load_stopmap, write_doc,
    PathOrReparam,
};
use render::{render_report, report_json};

#[derive(Parser)]
#[command(
    name = "reparam",
    version,
    about = "Exact reparametrizations with prescribed stop data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a stop-map file against the realizability conditions.
    Validate {
        /// Stop-map JSON file.
        input: PathBuf,
        /// Emit the report as JSON instead of text.
        #[arg(long, action = ArgAction::SetTrue)]
        json: bool,
    },
    /// Build the reparametrization realizing a stop map.
    Build {
        /// Stop-map JSON file.
        input: PathBuf,
        /// Output reparametrization file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Realize a bare stop family by the dyadic construction.
    Dyadic {
        /// Stop-family JSON file.
        input: PathBuf,
        /// Output reparametrization file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Enumeration as comma-separated 1-based positions (default:
        /// left-to-right).
        #[arg(long, value_delimiter = ',')]
        enumeration: Option<Vec<usize>>,
        /// Stop at this depth and emit the approximant instead of the limit.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=20))]
        depth: Option<u32>,
        /// Also dump the dyadic assignment to this file.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Factor a path through a regular path: p = q ∘ φ.
    Regularize {
        /// Path file (JSON, or CSV with rows t,x1,...,xd).
        input: PathBuf,
        /// Output file for the regular path q (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Output file for the reparametrization φ.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Extract the stop data of a reparametrization.
    Extract {
        /// Reparametrization JSON file.
        input: PathBuf,
        /// Output stop-map file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a reparametrization at exact rational points.
    Eval {
        /// Reparametrization JSON file.
        input: PathBuf,
        /// Points to evaluate at, as exact rationals.
        #[arg(required = true)]
        points: Vec<String>,
    },
    /// Emit equispaced samples as decimal CSV.
    Sample {
        /// Reparametrization or path JSON file.
        input: PathBuf,
        /// Number of steps; emits n+1 samples.
        #[arg(short, long)]
        n: u32,
        /// Fractional digits in the decimal rendering.
        #[arg(long, default_value_t = 12)]
        precision: u32,
        /// Output CSV file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tabulate sup |φ_k − φ_{k+1}| against the 1/2^k bound.
    CheckConvergence {
        /// Stop-family JSON file.
        input: PathBuf,
        /// Largest k in the table.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=19))]
        max_k: u32,
        /// Enumeration as comma-separated 1-based positions.
        #[arg(long, value_delimiter = ',')]
        enumeration: Option<Vec<usize>>,
    },
}

/// Failures carrying their exit code; clap's own usage errors already
/// exit 2.
#[derive(Debug)]
enum CliError {
    /// Exit 1: a validation failure; the report has been printed.
    Validation,
    /// Exit 2: malformed input.
    Malformed(String),
    /// Exit 3: internal assertion.
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation => 1,
            CliError::Malformed(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Validation => {}
                CliError::Malformed(msg) => eprintln!("error: {msg}"),
                CliError::Internal(msg) => eprintln!("internal error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn enumeration_from(
    spec: Option<Vec<usize>>,
    family: &StopFamily,
) -> Result<Enumeration, CliError> {
    match spec {
        None => Ok(Enumeration::positional(family.len())),
        Some(positions) => {
            if positions.len() != family.len() {
                return Err(CliError::Malformed(format!(
                    "enumeration has {} entries for a family of {} intervals",
                    positions.len(),
                    family.len()
                )));
            }
            Enumeration::from_one_based(positions).map_err(|e| CliError::Malformed(e.to_string()))
        }
    }
}

fn construct_error(e: ConstructError) -> CliError {
    match e {
        ConstructError::DepthBoundExceeded { .. } => CliError::Internal(e.to_string()),
        other => CliError::Malformed(other.to_string()),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { input, json } => {
            let map = load_stopmap(&input)?;
            let report = check_conditions(&map);
            if json {
                println!("{}", report_json(&report));
            } else {
                print!("{}", render_report(&report));
            }
            if report.ok() {
                Ok(())
            } else {
                Err(CliError::Validation)
            }
        }
        Command::Build { input, output } => {
            let map = load_stopmap(&input)?;
            match build_from_stopmap(&map) {
                Ok(phi) => write_doc(output.as_deref(), &phi),
                Err(ConstructError::InvalidStopMap(report)) => {
                    print!("{}", render_report(&report));
                    Err(CliError::Validation)
                }
                Err(e) => Err(construct_error(e)),
            }
        }
        Command::Dyadic {
            input,
            output,
            enumeration,
            depth,
            assignment,
        } => {
            let family = load_family(&input)?;
            let j = enumeration_from(enumeration, &family)?;
            let (phi, completion_depth) = match depth {
                Some(k) => (phi_k(&family, &j, k).map_err(construct_error)?, k),
                None => {
                    let (phi, records) =
                        dyadic_build_with_trace(&family, &j).map_err(construct_error)?;
                    let d = records.iter().map(|r| r.depth).max().unwrap_or(0);
                    (phi, d)
                }
            };
            if let Some(dump) = assignment {
                let a =
                    dyadic_assignment(&family, &j, completion_depth).map_err(construct_error)?;
                write_doc(Some(&dump), &a)?;
            }
            write_doc(output.as_deref(), &phi)
        }
        Command::Regularize { input, output, phi } => {
            let p = load_plpath(&input)?;
            let (q, reparam) = regularize(&p);
            write_doc(output.as_deref(), &q)?;
            if let Some(phi_path) = phi {
                write_doc(Some(&phi_path), &reparam)?;
            }
            Ok(())
        }
        Command::Extract { input, output } => {
            let phi = load_reparam(&input)?;
            let map = stop_data_of_reparam(&phi);
            write_doc(output.as_deref(), &map)
        }
        Command::Eval { input, points } => {
            let phi = load_reparam(&input)?;
            let mut lines = String::new();
            for s in &points {
                let t: Rational = s
                    .parse()
                    .map_err(|e| CliError::Malformed(format!("point {s:?}: {e}")))?;
                let v = phi
                    .evaluate(&t)
                    .map_err(|e| CliError::Malformed(e.to_string()))?;
                lines.push_str(&v.to_string());
                lines.push('\n');
            }
            print!("{lines}");
            Ok(())
        }
        Command::Sample {
            input,
            n,
            precision,
            output,
        } => {
            if n == 0 {
                return Err(CliError::Malformed("need at least one step".into()));
            }
            let doc = load_path_or_reparam(&input)?;
            let mut csv = String::new();
            match &doc {
                PathOrReparam::Reparam(_) => csv.push_str("t,value\n"),
                PathOrReparam::Path(p) => {
                    csv.push('t');
                    for i in 1..=p.dim() {
                        csv.push_str(&format!(",x{i}"));
                    }
                    csv.push('\n');
                }
            }
            for i in 0..=n {
                let t = Rational::ratio(i as i64, n as i64);
                csv.push_str(&t.to_decimal_string(precision));
                match &doc {
                    PathOrReparam::Reparam(phi) => {
                        let v = phi.evaluate(&t).expect("grid point within [0,1]");
                        csv.push(',');
                        csv.push_str(&v.to_decimal_string(precision));
                    }
                    PathOrReparam::Path(p) => {
                        for c in p.evaluate(&t).expect("grid point within [0,1]") {
                            csv.push(',');
                            csv.push_str(&c.to_decimal_string(precision));
                        }
                    }
                }
                csv.push('\n');
            }
            match output {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display()))),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::CheckConvergence {
            input,
            max_k,
            enumeration,
        } => {
            let family = load_family(&input)?;
            let j = enumeration_from(enumeration, &family)?;
            let mut all_pass = true;
            let mut prev = phi_k(&family, &j, 0).map_err(construct_error)?;
            for k in 0..=max_k {
                let next = phi_k(&family, &j, k + 1).map_err(construct_error)?;
                let d = sup_distance(&prev, &next);
                let bound = Rational::inv_pow2(k);
                let pass = d < bound;
                all_pass &= pass;
                println!(
                    "k={k} distance={d} bound={bound} {}",
                    if pass { "PASS" } else { "FAIL" }
                );
                prev = next;
            }
            if all_pass {
                Ok(())
            } else {
                Err(CliError::Validation)
            }
        }
    }
}
