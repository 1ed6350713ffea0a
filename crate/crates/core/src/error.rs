use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("segment length must be at least 1")]
    EmptySegment,

    #[error("segment ends {0} and {1} are not on one cuspidal line with integer spacing")]
    SegmentEnds(String, String),

    #[error("cannot truncate {k} cuspidals from a segment of relative length {len}")]
    TruncationTooLong { k: u32, len: u32 },

    #[error("cuspidal line size must be at least 1")]
    ZeroLineSize,

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: u32, found: u32 },

    #[error("principal series must have at least one factor")]
    EmptySeries,

    #[error("series is not induced from cuspidals: {0}")]
    NotCuspidalInduced(String),

    #[error("segments {0} and {1} are linked; a generic representation needs pairwise unlinked segments")]
    LinkedSegments(String, String),

    #[error("series have different factor multisets")]
    DifferentMultisets,

    #[error("factor {0} is not on the cuspidal line of {1}")]
    MixedLines(String, String),

    #[error("series is bad to segment {0}")]
    BadToSegment(String),

    #[error("multisegment names a generic representation; use the generic multiplicity path")]
    GenericMultisegment,

    #[error("Jacquet level {l} exceeds absolute length {len}")]
    JacquetLevel { l: u32, len: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
