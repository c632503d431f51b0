//! Job handling behind the `wkl` binary: parse a job, compute or load the
//! tables it needs, and write the requested artifact.

pub mod cache;
pub mod export;
pub mod job;

use std::fs;
use std::io::Write;
use std::sync::Arc;

use log::info;
use thiserror::Error;
use wkl_core::verify::CheckContext;
use wkl_core::{
    compute_generalized_verma, compute_ordinary_kl, compute_whittaker_kl, multiplicities, CartanDatum, KlOptions,
    ParabolicQuotient, TableKind, ThetaSubset, VerifyReport, WeylGroup,
};

pub use cache::Cache;
pub use job::{Command, Format, JobSpec};

/// Bad input from the user; maps to exit status 2.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error("computation failed: {0}")]
    Compute(#[from] wkl_core::KlError),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct RunOutcome {
    pub bytes: Vec<u8>,
    pub exit_code: i32,
}

fn table_key(kind: TableKind, job: &JobSpec, theta: &ThetaSubset) -> String {
    let command = match kind {
        TableKind::Whittaker => "table",
        TableKind::GeneralizedVerma => "gverma",
    };
    format!("{command} cartan={} theta={theta}", job.cartan)
}

/// Computes the artifact of a job without writing it anywhere.
pub fn execute(job: &JobSpec) -> Result<RunOutcome, RunError> {
    let datum = CartanDatum::new(job.cartan);
    let group = Arc::new(WeylGroup::enumerate(&datum).map_err(|e| UsageError(e.to_string()))?);
    info!("{} has {} elements", job.cartan, group.order());
    let quotient = Arc::new(ParabolicQuotient::new(group.clone(), job.theta.clone()));
    let options = KlOptions {
        parallelism: job.parallelism,
        ..KlOptions::default()
    };
    let cache = job.cache_dir.as_ref().map(Cache::new);
    let cache = cache.as_ref();
    let empty = ThetaSubset::empty();

    let whittaker = || {
        Cache::table_or_compute(cache, &table_key(TableKind::Whittaker, job, &job.theta), TableKind::Whittaker, || {
            compute_whittaker_kl(&quotient, options)
        })
    };
    let gverma = || {
        let key = table_key(TableKind::GeneralizedVerma, job, &job.theta);
        Cache::table_or_compute(cache, &key, TableKind::GeneralizedVerma, || {
            compute_generalized_verma(&quotient, options)
        })
    };
    let ordinary = || {
        Cache::table_or_compute(cache, &table_key(TableKind::Whittaker, job, &empty), TableKind::Whittaker, || {
            compute_ordinary_kl(&group, options)
        })
    };

    let ok = |bytes| RunOutcome { bytes, exit_code: EXIT_OK };
    Ok(match job.command {
        Command::Table => ok(export::export_table(&whittaker()?, job.format)),
        Command::Kl => ok(export::export_table(&ordinary()?, job.format)),
        Command::Gverma => ok(export::export_table(&gverma()?, job.format)),
        Command::Mult => {
            let m = multiplicities(&whittaker()?)?;
            ok(export::export_multiplicities(&quotient, &m, job.format))
        }
        Command::Verify => {
            let w = whittaker()?;
            let mut ctx = CheckContext::new(&w, options);
            use wkl_core::CheckName::*;
            if job.checks.iter().any(|c| matches!(c, Duality | Gverma)) {
                ctx = ctx.with_ordinary(ordinary()?);
            }
            if job.checks.iter().any(|c| matches!(c, Inversion | Gverma)) {
                ctx = ctx.with_gverma(gverma()?);
            }
            let mut report = VerifyReport::default();
            for &check in &job.checks {
                let outcome = ctx.run(check)?;
                info!("{check}: {:?} in {} ms", outcome.status, outcome.millis);
                report.insert(check, outcome);
            }
            let negatives = w.negative_corrections();
            if !negatives.is_empty() {
                info!("{} negative recursion coefficients, first {:?}", negatives.len(), negatives[0]);
            }
            RunOutcome {
                bytes: export::export_report(&report, job.format),
                exit_code: if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED },
            }
        }
    })
}

/// Runs a job and writes its artifact to the output path or stdout.
pub fn run(job: &JobSpec) -> Result<i32, RunError> {
    let outcome = execute(job)?;
    match &job.output {
        Some(path) => {
            let err = |source| RunError::Output {
                path: path.display().to_string(),
                source,
            };
            fs::write(path, &outcome.bytes).map_err(err)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&outcome.bytes)
                .and_then(|_| out.flush())
                .map_err(|source| RunError::Output {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(outcome.exit_code)
}
