use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wkl_cli::{run, Command, JobSpec, RunError, UsageError, EXIT_USAGE};
use wkl_core::Parallelism;

/// Exact Whittaker and generalized Verma Kazhdan-Lusztig tables.
#[derive(Parser)]
#[command(name = "wkl", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Whittaker polynomial table of a parabolic quotient
    Table(Common),
    /// Ordinary Kazhdan-Lusztig table of the Weyl group
    Kl(Common),
    /// Generalized Verma polynomial table
    Gverma(Common),
    /// Multiplicity matrices lambda = P(-1) and mu = lambda^-1
    Mult(Common),
    /// Run the verification checks; exits 1 if any check fails
    Verify {
        #[command(flatten)]
        common: Common,
        /// `all` or a comma-separated subset of: structural, selfduality,
        /// uniqueness, certificate, duality, inversion, gverma
        #[arg(long, default_value = "all")]
        checks: String,
    },
}

#[derive(Args)]
struct Common {
    /// Cartan type, e.g. A2, B3, F4
    #[arg(long)]
    cartan: String,
    /// Parabolic subset: none, all, or 1-based generator indices like 1,3
    #[arg(long, default_value = "none")]
    theta: String,
    /// json, csv or text
    #[arg(long, default_value = "json")]
    format: String,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Directory for cached tables
    #[arg(long, env = "WKL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Disable data parallelism
    #[arg(long)]
    sequential: bool,
}

fn build_job(cli: Cli) -> Result<JobSpec, UsageError> {
    let (command, common, checks) = match cli.command {
        Cmd::Table(c) => (Command::Table, c, None),
        Cmd::Kl(c) => (Command::Kl, c, None),
        Cmd::Gverma(c) => (Command::Gverma, c, None),
        Cmd::Mult(c) => (Command::Mult, c, None),
        Cmd::Verify { common, checks } => (Command::Verify, common, Some(checks)),
    };
    let mut job = JobSpec::new(command, &common.cartan, &common.theta, checks.as_deref())?;
    job.format = common.format.parse()?;
    job.output = common.output;
    job.cache_dir = common.cache_dir;
    if common.sequential {
        job.parallelism = Parallelism::Sequential;
    }
    Ok(job)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = build_job(cli).map_err(RunError::from).and_then(|job| run(&job));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
