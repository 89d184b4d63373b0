use thiserror::Error;

use crate::state::{BasisCell, Party};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown basis cell label `{0}` (expected U1..U3, V1..V3, W1..W3 or a pair like (+1,-1))")]
    UnknownCell(String),

    #[error("cell {0} appears more than once")]
    DuplicateCell(BasisCell),

    #[error("no terms given")]
    EmptyTerms,

    #[error("all amplitudes are zero")]
    ZeroState,

    #[error("magnitude for {cell} must be nonnegative and finite, got {value}")]
    BadMagnitude { cell: BasisCell, value: f64 },

    #[error("state norm {norm} deviates from 1 and normalization was not requested")]
    NotNormalized { norm: f64 },

    #[error("local operator on party {side} is singular (smallest singular value {smallest:e})")]
    SingularOperator { side: Party, smallest: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("support pattern is empty")]
    EmptyPattern,

    #[error("term count {0} out of range 1..=9")]
    TermCount(usize),

    #[error("invalid parameter point: {0}")]
    InvalidParams(String),

    #[error("gradient undefined: magnitude {index} is {value:e}, below 1e-9")]
    NearBoundary { index: usize, value: f64 },

    #[error("point lies in the zero-measure region (a reduced entropy vanishes)")]
    ZeroMeasureRegion,

    #[error("malformed state file: {0}")]
    StateFile(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
