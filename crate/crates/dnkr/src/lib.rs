//! Affine column crystals of type D, rigged configurations, and the
//! statistic-preserving bijection between them.
//!
//! The crate models the single-column Kirillov-Reshetikhin crystals
//! `B^{k,1}` for the rank-n even orthogonal root system, the rigged
//! configurations attached to tensor products of such crystals, the
//! box-removal bijection connecting the two pictures, the energy and
//! cocharge statistics it preserves, and the resulting polynomial
//! identity between one dimensional configuration sums and fermionic
//! sums.  Everything is exact integer combinatorics; the `cli` module
//! exposes an exhaustive desk-scale verification harness.

pub mod bijection;
pub mod cli;
pub mod columns;
pub mod crystal;
pub mod energy;
pub mod fermionic;
pub mod rc;
pub mod rmatrix;
pub mod rootdata;

/// Crate-wide error type.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {0}: the fork at node n-2 needs n >= 4")]
    InvalidRank(u8),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("weight has no integral coefficient expansion over the fundamental weights")]
    NotInLambdaSpan,
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("filling failed: {0}")]
    Fill(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid rigged configuration: {0}")]
    InvalidRc(String),
    #[error("bijection step failed: {0}")]
    Bijection(String),
    #[error("no preimage: {0}")]
    NoPreimage(String),
    #[error("r-matrix construction failed: {0}")]
    RMatrix(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
