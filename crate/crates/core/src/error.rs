use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("transpose mismatch for `{name}`: {reason}")]
    TransposeMismatch { name: String, reason: String },
    #[error("generator `{0}` has no transpose partner")]
    MissingTranspose(String),
    #[error("atom mismatch: {0}")]
    AtomMismatch(String),
    #[error("terms are not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("invalid rewrite rule ({citation}): {reason}")]
    InvalidRule { citation: String, reason: String },
    #[error("motive objects do not match: {0}")]
    ObjectMismatch(String),
    #[error("twist bookkeeping violated at entry ({row}, {col}): {reason}")]
    TwistInconsistency { row: usize, col: usize, reason: String },
    #[error("not an endomorphism")]
    NotEndomorphism,
    #[error("diagonal is not a common nonzero scalar multiple of the identity")]
    DiagonalNotScalar,
    #[error("strictly upper entry ({row}, {col}) is nonzero after normalization: {entry}")]
    UpperNonzero { row: usize, col: usize, entry: String },
    #[error("inverse check failed: {0}")]
    InverseCheckFailed(String),
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("missing table entry for `{0}`")]
    MissingTableEntry(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("missing Chow-Kunneth input: {0}")]
    MissingCk(String),
    #[error("invalid multidegree: {0}")]
    InvalidMultidegree(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
