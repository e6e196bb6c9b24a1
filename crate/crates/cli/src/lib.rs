//! Scenario driver, file-backed commands and benchmark harness for the
//! e-ticket scheme.

use std::path::PathBuf;

use clap::ValueEnum;
use eticket::groups::GroupError;
use eticket::policy::PolicyError;
use eticket::scheme::SchemeError;
use eticket::wire::WireError;
use eticket::zkp::ZkpError;
use eticket::SetupError;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;
use thiserror::Error;

pub mod bench;
pub mod commands;
pub mod config;
pub mod demo;
pub mod store;

pub const DEFAULT_PRIME: u64 = 18_446_744_073_709_551_557;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Tate pairing on the supersingular curve `y^2 = x^3 + x`.
    Pairing,
    /// Discrete-log test group; insecure, for checking the algebra.
    Exponent,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Pairing => "pairing",
            Backend::Exponent => "exponent",
        }
    }
}

/// Runs `$body` with `$grp` bound to a group of the chosen backend.
#[macro_export]
macro_rules! with_group {
    ($backend:expr, $prime:expr, |$grp:ident| $body:expr) => {
        match $backend {
            $crate::Backend::Pairing => {
                let $grp = ::eticket::groups::TypeACurve::default();
                $body
            }
            $crate::Backend::Exponent => {
                let $grp = ::eticket::groups::ExponentGroup::new($prime)?;
                $body
            }
        }
    };
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Setup(#[from] SetupError),
    #[error(transparent)]
    Proof(#[from] ZkpError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Check(String),
    #[error("{0}")]
    Usage(String),
}

/// A deterministic generator for one party; each party gets its own stream.
pub fn seeded(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
