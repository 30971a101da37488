//! Command-line layer over [`qbound_core`]: JSON matrix files, randomized
//! verification campaigns, and the fixed-purity Monte Carlo sweep.
//!
//! Failures are split into two classes so scripts can tell plumbing problems
//! from falsified mathematics: [`Failure::Input`] maps to exit code 1,
//! [`Failure::Violation`] to exit code 2.

use std::fmt;

pub mod io;
pub mod sweep;
pub mod verify;

/// Why a command could not finish cleanly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad flags, unreadable or invalid files, unwritable outputs.
    Input(String),
    /// An inequality or residual contract was numerically breached.
    Violation(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(msg) => write!(f, "{msg}"),
            Failure::Violation(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<qbound_core::Error> for Failure {
    fn from(e: qbound_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}
