//! LDPC code construction and analysis for the asynchronous unsourced
//! binary adder channel (AU-BAC): two users transmit codewords from the
//! same code with a symbol delay, the receiver sees the noiseless sum,
//! and joint peeling decoding recovers both words unless the erased
//! positions contain a stopping set of the joint graph.
//!
//! The crate provides
//! - sparse GF(2) parity-check matrices with alist I/O ([`pcm`], [`alist`], [`gf2`]),
//! - degree-distribution ensembles and their analytic bounds ([`ensemble`]),
//! - RCC, Even-RCC, PEG and deterministic code constructions ([`construct`]),
//! - distance-multiset analysis and stopping-set removal by column
//!   permutation ([`stopset`]),
//! - the channel model, joint peeling decoder and Monte Carlo PUPE
//!   estimation ([`aubac`]),
//! - batch experiment harnesses emitting CSV ([`experiment`]).

pub mod alist;
pub mod aubac;
pub mod construct;
pub mod ensemble;
pub mod experiment;
pub mod gf2;
pub mod pcm;
pub mod stopset;

pub use pcm::{ColumnPermutation, Pcm};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alist parse error at line {line}: {msg}")]
    AlistParse { line: usize, msg: String },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate code: parity-check matrix has full column rank")]
    DegenerateCode,
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),
    #[error("degree sequence balancing infeasible: {0}")]
    BalancingInfeasible(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
