use thiserror::Error;

/// Errors surfaced by algorithm entry points and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fault probability must lie in [0, 1/2), got {0}")]
    InvalidProbability(f64),
    #[error("failure probability q must lie in (0, 1/2), got {0}")]
    InvalidFailureProbability(f64),
    #[error("input set must be non-empty")]
    EmptyInput,
    #[error("target k = {k} out of range for n = {n} (need 1 <= k <= n-1)")]
    InvalidK { k: usize, n: usize },
    #[error("rank map is not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("truncation round {i_max} out of range (valid 1..={max})")]
    InvalidRound { i_max: u32, max: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
