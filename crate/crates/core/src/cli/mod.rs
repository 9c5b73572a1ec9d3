//! Command layer behind the `twosub` binary: configuration, commands,
//! reports and the built-in reproduction suite.

pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::finsys::{FinsysError, DEFAULT_ANGLE_TOL};
use crate::linalg::LinalgError;
use crate::seqclassify::{Budgets, ClassifyError, Rule};
use crate::seqmodel::ModelError;

pub use commands::{cmd_classify, cmd_invariants, cmd_mu_csv, cmd_witness};
pub use config::{ConfigFile, SystemConfig};
pub use report::Report;
pub use selftest::cmd_selftest;

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown system id {0:?}")]
    UnknownId(String),
    #[error("cannot compare {0}")]
    KindMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Finsys(#[from] FinsysError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Which isomorphism notion to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelationKind {
    Unitary,
    #[default]
    Bounded,
    Algebraic,
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unitary" => Ok(RelationKind::Unitary),
            "bounded" => Ok(RelationKind::Bounded),
            "algebraic" => Ok(RelationKind::Algebraic),
            other => Err(format!("unknown relation {other:?}; expected unitary, bounded or algebraic")),
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Unitary => "unitary",
            RelationKind::Bounded => "bounded",
            RelationKind::Algebraic => "algebraic",
        })
    }
}

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Options {
    pub relation: RelationKind,
    pub budgets: Budgets,
    /// Angle threshold for finite intersections.
    pub tol: f64,
    pub disabled: BTreeSet<Rule>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            relation: RelationKind::default(),
            budgets: Budgets::default(),
            tol: DEFAULT_ANGLE_TOL,
            disabled: BTreeSet::new(),
        }
    }
}

/// 0 when decided, 1 when a self-test criterion failed, 2 when some verdict
/// is undecided.
pub fn exit_code(report: &Report) -> i32 {
    if report.failed() {
        EXIT_ERROR
    } else if report.undecided() {
        EXIT_UNDECIDED
    } else {
        EXIT_DECIDED
    }
}
