use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use contact_prolong::cli::{self, Settings};
use contact_prolong::document::ProblemDocument;
use contact_prolong::prolong::Verdict;
use contact_prolong::Error;

/// Contact finite-type analysis of linear differential operators on the
/// Heisenberg group.
#[derive(Parser)]
#[command(name = "contact-prolong", version)]
struct Cli {
    /// Maximum number of prolongation levels.
    #[arg(long, global = true)]
    lmax: Option<usize>,

    /// Weighted degree cap for the polynomial oracle.
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// Emit JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,

    /// Exit with status 2 when the chain does not vanish within the cap.
    #[arg(long, global = true)]
    require_finite_type: bool,

    /// Include wall-clock timings in prolong reports.
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension and basis summary of S⊥^l.
    Sperp { n: usize, l: usize },
    /// Enhanced symbol of the operator in a problem document.
    Symbol { file: PathBuf },
    /// Full pipeline: symbol, chain, connection, oracle, Kostant bound.
    Prolong { file: PathBuf },
    /// Bounding weight and its Weyl dimension.
    Bound {
        n: usize,
        order: usize,
        /// Labels of the weight of E, comma separated (zeros when omitted).
        #[arg(value_delimiter = ',')]
        weight: Vec<u32>,
    },
    /// Graded dimension check for E = ⊙^m.
    Check { n: usize, order: usize, m: usize },
    /// Polynomial solution dimensions by weighted degree.
    Oracle { file: PathBuf },
    /// Checks whether a section solves the operator.
    Verify {
        file: PathBuf,
        /// One polynomial per component of E.
        #[arg(long = "component", required = true)]
        components: Vec<String>,
    },
}

fn read_document(path: &PathBuf) -> Result<ProblemDocument, Error> {
    ProblemDocument::parse(&std::fs::read_to_string(path)?)
}

fn emit<T: Serialize>(report: &T, json: bool) -> Result<(), Error> {
    print!("{}", cli::render(report, json)?);
    Ok(())
}

fn run(args: &Cli) -> Result<ExitCode, Error> {
    let settings = Settings {
        lmax: args.lmax,
        nmax: args.nmax,
        timings: args.timings,
    };
    match &args.command {
        Command::Sperp { n, l } => emit(&cli::sperp(*n, *l)?, args.json)?,
        Command::Symbol { file } => emit(&cli::symbol(&read_document(file)?)?, args.json)?,
        Command::Prolong { file } => {
            let report = cli::prolong(&read_document(file)?, &settings)?;
            emit(&report, args.json)?;
            if args.require_finite_type && report.verdict() == Verdict::NotFiniteTypeWithinCap {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Bound { n, order, weight } => {
            let weight = if weight.is_empty() { vec![0; *n] } else { weight.clone() };
            emit(&cli::bound(*n, *order, &weight)?, args.json)?
        }
        Command::Check { n, order, m } => emit(&cli::check(*n, *order, *m, &settings)?, args.json)?,
        Command::Oracle { file } => emit(&cli::run_oracle(&read_document(file)?, &settings)?, args.json)?,
        Command::Verify { file, components } => emit(&cli::verify(&read_document(file)?, components)?, args.json)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(Error::NotTerminated(cap)) if args.require_finite_type => {
            eprintln!("error: prolongation did not terminate within {cap} levels");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
