use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use wkl_core::{CartanType, CheckName, Parallelism, ThetaSubset};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    /// Whittaker table of the quotient.
    Table,
    /// Ordinary table, the quotient by the empty set.
    Kl,
    Gverma,
    Mult,
    Verify,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Kl => "kl",
            Command::Gverma => "gverma",
            Command::Mult => "mult",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Command::Table, Command::Kl, Command::Gverma, Command::Mult, Command::Verify]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UsageError(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(UsageError(format!("unknown format {s:?}, expected json, csv or text"))),
        }
    }
}

/// One invocation: what to compute, where to write it, and how.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub cartan: CartanType,
    pub theta: ThetaSubset,
    pub checks: Vec<CheckName>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub parallelism: Parallelism,
}

impl JobSpec {
    /// Validates the raw command-line strings.
    pub fn new(command: Command, cartan: &str, theta: &str, checks: Option<&str>) -> Result<Self, UsageError> {
        let cartan: CartanType = cartan.trim().parse().map_err(|e| UsageError(format!("{e}")))?;
        let theta = ThetaSubset::parse(theta, cartan.rank()).map_err(|e| UsageError(e.to_string()))?;
        if command == Command::Kl && !theta.is_empty() {
            return Err(UsageError("kl computes the ordinary table; use --theta none".into()));
        }
        let checks = match (command, checks) {
            (Command::Verify, Some(s)) => CheckName::parse_list(s).map_err(UsageError)?,
            (Command::Verify, None) => CheckName::ALL.to_vec(),
            (_, Some(_)) => return Err(UsageError("--checks only applies to verify".into())),
            (_, None) => Vec::new(),
        };
        Ok(JobSpec {
            command,
            cartan,
            theta,
            checks,
            format: Format::default(),
            output: None,
            cache_dir: None,
            parallelism: Parallelism::default(),
        })
    }

    /// Canonical text of what is computed, e.g. `table cartan=A2 theta=1`.
    /// Output location, format and execution mode do not take part.
    pub fn canonical(&self) -> String {
        let mut s = format!("{} cartan={} theta={}", self.command.as_str(), self.cartan, self.theta);
        if self.command == Command::Verify {
            let checks: Vec<&str> = self.checks.iter().map(|c| c.as_str()).collect();
            s.push_str(" checks=");
            s.push_str(&checks.join(","));
        }
        s
    }

    /// Inverse of [`JobSpec::canonical`].
    pub fn from_canonical(s: &str) -> Result<Self, UsageError> {
        let bad = || UsageError(format!("malformed job key {s:?}"));
        let mut parts = s.split(' ');
        let command: Command = parts.next().ok_or_else(bad)?.parse()?;
        let mut field = |name: &str| -> Result<String, UsageError> {
            let part = parts.next().ok_or_else(bad)?;
            part.strip_prefix(name).and_then(|r| r.strip_prefix('=')).map(str::to_string).ok_or_else(bad)
        };
        let cartan = field("cartan")?;
        let theta = field("theta")?;
        let checks = if command == Command::Verify { Some(field("checks")?) } else { None };
        if parts.next().is_some() {
            return Err(bad());
        }
        JobSpec::new(command, &cartan, &theta, checks.as_deref())
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
