use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {what} = {value} must be {expect}")]
    Domain {
        what: &'static str,
        value: f64,
        expect: &'static str,
    },

    /// Invalid model or run parameters.
    #[error("invalid parameters: {0}")]
    Params(String),

    /// A degree specification cannot be realized.
    #[error("degree sequence error: {0}")]
    DegreeSequence(String),

    /// Rejection sampling exhausted its budget.
    #[error(
        "sampling failed after {tries} tries \
         ({rejected_non_simple} non-simple, {rejected_disconnected} disconnected)"
    )]
    SamplingFailure {
        tries: u64,
        rejected_non_simple: u64,
        rejected_disconnected: u64,
    },

    /// `stop = all` cannot be met: some nodes are unreachable from the seed.
    #[error("{unreached} nodes unreachable; stranded component sizes {component_sizes:?}")]
    UnreachableNodes {
        unreached: usize,
        component_sizes: Vec<usize>,
    },

    /// The explored component ran out of active clones before the stop rule.
    #[error("explored component died at iteration {iteration} after {adoptions} adoptions")]
    ComponentDeath { iteration: u64, adoptions: u64 },

    /// A trace does not contain enough adoptions for the requested statistic.
    #[error("trace reached {reached} adoptions, statistic needs {needed}")]
    InsufficientAdoptions { needed: u64, reached: u64 },

    /// Too many replicas of an ensemble failed.
    #[error("ensemble failed: {failed}/{total} replicas errored; first: {first}")]
    EnsembleFailure {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expect: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expect,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
