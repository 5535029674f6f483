use thiserror::Error;

/// Errors raised by the cone, geometry and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("matrix of size {n} exceeds the oracle limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("polynomial must have a nonzero leading coefficient and degree >= 1")]
    InvalidPolynomial,

    #[error("root finder did not converge after {iterations} iterations")]
    RootsDidNotConverge { iterations: usize },

    #[error("degenerate Moebius map (ad - bc = 0)")]
    DegenerateMoebius,

    #[error("point {re} + {im}i is not in the open right half-plane")]
    OutsideRightHalfPlane { re: f64, im: f64 },

    #[error("invalid disk: {0}")]
    InvalidDisk(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero vector is not a cone point")]
    ZeroVector,

    #[error("vector is not in the cone")]
    NotInCone,

    #[error("base point must lie in the interior of the cone")]
    NotInterior,

    #[error("vectors must be unit length")]
    NotUnit,

    #[error("projective distance is infinite")]
    InfiniteDistance,

    #[error("matrix does not map the cone into its interior")]
    ConditionFails,

    #[error("power iteration did not converge within {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("cone specification needs at least one functional")]
    EmptySpec,

    #[error("functional {0} is identically zero")]
    ZeroFunctional(usize),

    #[error("every functional vanishes on the base point")]
    DegenerateInput,

    #[error("sequence vector {name} for k = {k} is outside the cone")]
    SequenceMembership { name: &'static str, k: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
