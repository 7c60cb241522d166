// Guards like `!(x > 0.0)` are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use output::Format;

/// Numerical experiments with ζ moments, Dirichlet polynomials, Perron's
/// formula and the moment-conjecture constants.
#[derive(Debug, Parser)]
#[command(name = "zetamoments", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized families and ensemble checks.
    #[arg(long, global = true, default_value_t = zetamoments::verify::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ζ(s) by several methods side by side.
    Eval(commands::EvalArgs),
    /// Moment integrals on vertical lines against their main terms.
    Moment(commands::MomentArgs),
    /// Exact mean square of a Dirichlet polynomial.
    Polymean(commands::PolymeanArgs),
    /// Perron kernel, sum estimates and residue main terms.
    Perron(PerronArgs),
    /// Partial sums of arithmetic functions against residue polynomials.
    Asym(commands::AsymArgs),
    /// g_k, a_k and the conjectured moments.
    Conj(commands::ConjArgs),
    /// Factor a local Euler series into powers of ζ.
    Factorize(commands::FactorizeArgs),
    /// Run the acceptance checks.
    VerifyAll(commands::VerifyArgs),
}

#[derive(Debug, Args)]
pub struct PerronArgs {
    #[command(subcommand)]
    pub mode: commands::PerronMode,
}

pub struct Context {
    pub seed: u64,
    pub format: Format,
}

/// Failure carrying the process exit code.
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl From<zetamoments::Error> for Failure {
    fn from(e: zetamoments::Error) -> Self {
        Failure { code: if e.is_validation() { 2 } else { 3 }, kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, kind: "io".into(), message: e.to_string() }
    }
}

fn report_failure(f: &Failure) -> ExitCode {
    let record = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
    eprintln!("{record}");
    ExitCode::from(f.code)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure { code: 2, kind: "invalid-config".into(), message: "--jobs must be positive".into() });
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure { code: 2, kind: "invalid-config".into(), message: e.to_string() })?;
    }
    let ctx = Context { seed: cli.seed, format: cli.format };
    let config = format!("seed={} {:?}", cli.seed, cli.command);
    let outcome = commands::dispatch(&cli.command, &ctx)?;
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match (&outcome.text, cli.format) {
        (Some(text), Format::Table) => sink.write_all(text.as_bytes())?,
        _ => outcome.report.write(cli.format, &config, &mut sink)?,
    }
    sink.flush()?;
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let message = e.render().to_string();
            return report_failure(&Failure { code: 2, kind: "usage".into(), message: message.trim().to_string() });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => report_failure(&f),
    }
}
