//! Interacting k-tilings of the Aztec diamond: exact sampling by generalized
//! domino shuffling, the equivalent colored-particle Markov chain, a
//! brute-force enumeration oracle with exact rational arithmetic, spider-move
//! identity checks, and a deterministic SVG renderer.

pub mod cli;
pub mod dynamics;
pub mod geometry;
pub mod oracle;
pub mod partitions;
pub mod render;
pub mod rng;
pub mod shuffle;
pub mod spider;
pub mod tiling;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration or user input (CLI exit code 2).
    #[error("config error: {0}")]
    Config(String),
    /// A structural invariant failed; indicates a bug or corrupt state
    /// (CLI exit code 3).
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
