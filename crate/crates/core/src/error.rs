use thiserror::Error;

use crate::network::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller supplied an argument outside the operation's domain.
    Usage,
    /// The input data (network, evidence, sample) is malformed or inconsistent.
    Data,
    /// The analysis cannot be carried out exactly on this input.
    Unsupported,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(ValidationReport),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}` has no alternative `{label}`")]
    UnknownAlternative { node: String, label: String },

    #[error("alternative index {index} out of range for node `{node}` ({count} alternatives)")]
    AlternativeOutOfRange {
        node: String,
        index: usize,
        count: usize,
    },

    #[error("a probability vector needs at least 2 alternatives, got {0}")]
    TooFewAlternatives(usize),

    #[error("finite-support distribution has no atoms")]
    EmptySupport,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("beta inverse cdf did not converge (alpha={alpha}, beta={beta}, r={r})")]
    NoConvergence { alpha: f64, beta: f64, r: f64 },

    #[error("evidence has zero probability: {assignment}")]
    ZeroProbabilityEvidence { assignment: String },

    #[error("trial {trial}: evidence has zero probability in the sampled network")]
    ZeroProbabilityTrial { trial: usize },

    #[error("network is multiply connected; condition on a root loop cutset instead")]
    MultiplyConnected,

    #[error("unsupported evidence at `{node}`: {reason}; use Monte Carlo estimation (mc) instead")]
    UnsupportedEvidence { node: String, reason: String },

    #[error("invalid cutset: {0}")]
    InvalidCutset(String),

    #[error("node `{0}` has a Dirichlet distribution and cannot be enumerated")]
    NotEnumerable(String),

    #[error("{count} atom combinations exceed the enumeration limit of {limit}")]
    CombinationExplosion { count: u128, limit: u128 },

    #[error("no n up to {cap} satisfies the requested bound")]
    CapExceeded { cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_)
            | Error::TooFewAlternatives(_)
            | Error::AlternativeOutOfRange { .. } => ErrorKind::Usage,
            Error::MultiplyConnected
            | Error::UnsupportedEvidence { .. }
            | Error::InvalidCutset(_)
            | Error::NotEnumerable(_)
            | Error::CombinationExplosion { .. }
            | Error::CapExceeded { .. }
            | Error::NoConvergence { .. } => ErrorKind::Unsupported,
            _ => ErrorKind::Data,
        }
    }

    /// Stable one-word code for logs and front ends.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::InvalidNetwork(_) => "invalid-network",
            Error::UnknownNode(_) => "unknown-node",
            Error::UnknownAlternative { .. } => "unknown-alternative",
            Error::AlternativeOutOfRange { .. } => "alternative-out-of-range",
            Error::TooFewAlternatives(_) => "too-few-alternatives",
            Error::EmptySupport => "empty-support",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NoConvergence { .. } => "no-convergence",
            Error::ZeroProbabilityEvidence { .. } => "zero-probability-evidence",
            Error::ZeroProbabilityTrial { .. } => "zero-probability-trial",
            Error::MultiplyConnected => "multiply-connected",
            Error::UnsupportedEvidence { .. } => "unsupported-evidence",
            Error::InvalidCutset(_) => "invalid-cutset",
            Error::NotEnumerable(_) => "not-enumerable",
            Error::CombinationExplosion { .. } => "combination-explosion",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}
