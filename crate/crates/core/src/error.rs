use thiserror::Error;

use crate::process::ProcessVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two amplitudes with different `(n, v)` were multiplied; their output
    /// states are orthogonal.
    #[error("mismatched radicals: (n={left_n}, v={left_v}) vs (n={right_n}, v={right_v})")]
    MismatchedRadical {
        left_n: u32,
        left_v: u32,
        right_n: u32,
        right_v: u32,
    },

    #[error("process {0} annihilates the SH vacuum")]
    InadmissibleProcess(ProcessVector),

    #[error("invalid diagram pair {left} / {right}: net SH photons {left_v} != {right_v}")]
    InvalidPair {
        left: ProcessVector,
        right: ProcessVector,
        left_v: i64,
        right_v: i64,
    },

    #[error("process {0} has an irrational cofactor at n={1}")]
    IrrationalCofactor(ProcessVector, u32),

    #[error("expansion order {0} must be even")]
    OddOrder(u32),

    #[error("input weights are empty")]
    EmptyWeights,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Mandel Q is undefined for zero mean photon number")]
    UndefinedQ,
}

pub type Result<T> = std::result::Result<T, Error>;
