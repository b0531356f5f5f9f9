//! Exit codes and per-item failure bookkeeping.

use std::fmt;
use std::process::ExitCode;

use authorship_lm::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_PARTIAL: u8 = 2;
pub const EXIT_DIVERGED: u8 = 3;

/// Raised for anything detected before a command has side effects.
#[derive(Debug)]
pub struct ConfigError(pub anyhow::Error);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(e: impl Into<anyhow::Error>) -> anyhow::Error {
    ConfigError(e.into()).into()
}

/// Failures of individual (author, seed) items; the run carries on past them.
#[derive(Debug, Default)]
pub struct RunStatus {
    pub failures: Vec<String>,
    pub diverged: usize,
}

impl RunStatus {
    pub fn fail(&mut self, what: &str, err: &anyhow::Error) {
        if matches!(err.downcast_ref::<Error>(), Some(Error::Diverged { .. })) {
            self.diverged += 1;
        }
        eprintln!("error: {what}: {err:#}");
        self.failures.push(format!("{what}: {err:#}"));
    }

    pub fn merge(&mut self, other: RunStatus) {
        self.failures.extend(other.failures);
        self.diverged += other.diverged;
    }

    /// Divergence outranks other failures.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(if self.diverged > 0 {
            EXIT_DIVERGED
        } else if !self.failures.is_empty() {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        })
    }
}
