//! Interaction harness: coins, transcripts, views and distribution audits.
//!
//! An execution is driven by a [`Verifier`] through a [`Transcript`]. The
//! other side is a [`Responder`], which may be an honest prover, a cheating
//! prover, a simulator or a replay of a recorded [`View`]. Views from two
//! processes are compared with [`audit_exact`] (full coin enumeration with
//! rational weights) or [`audit_chi_square`] (sampled histograms).

mod audit;
mod coins;
mod transcript;

pub use audit::{
    audit_chi_square, audit_exact, trial_seed, AuditMode, AuditReport, ProjectionTest, CHI2_ALPHA, CHI2_SAMPLES,
};
pub use coins::{enumerate, CoinError, Coins, EnumCoins, Namespace, SeededCoins};
pub use transcript::{
    replay, run_interactive, Execution, LedgerEntry, Message, Party, QueryRecord, Responder, Transcript, Verifier, View,
};

use crate::algebra::AlgebraError;
use crate::detect::DetectError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Coins(#[from] CoinError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("protocol shape violation: {0}")]
    Shape(String),
    #[error("unknown oracle {0}")]
    UnknownOracle(String),
    #[error("replay failed: {0}")]
    Replay(String),
    #[error("query accounting violated: {0}")]
    Accounting(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("query bound {0} exceeded")]
    QueryBound(usize),
}
