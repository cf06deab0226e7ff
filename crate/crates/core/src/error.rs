use thiserror::Error;

use crate::dualgraph::ValidationReport;

/// Errors produced by the library.
///
/// Validation *findings* are not errors: [`crate::dualgraph::validate`]
/// returns a report. The variants here are raised when an operation cannot
/// produce a meaningful result for its input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("matrix data has {actual} entries, expected {rows}x{cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        actual: usize,
    },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NonSymmetric { row: usize, col: usize },

    #[error("invalid invariant factors: {0}")]
    InvalidInvariantFactors(String),

    #[error("torsion exponents must be at least 1")]
    ZeroTorsionExponent,

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge from `{0}` to itself")]
    SelfLoop(String),

    #[error("more than one edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),

    #[error("invalid value for `{field}`: {value} (must be at least 1)")]
    NonPositive { field: &'static str, value: i64 },

    #[error("unsupported Dynkin index {family}{n}")]
    UnsupportedIndex { family: char, n: usize },

    #[error("gcd({k}, {a}) != 1 or a is out of range 1 <= a < k")]
    NotCoprime { k: i64, a: i64 },

    #[error(
        "configuration is not a forest; H^1(C, O_C) = 0 cannot be certified from the dual graph"
    )]
    NotAForest,

    #[error("vector has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("d = {d} of vertex `{vertex}` does not divide intersection number {value}")]
    DivisibilityViolation {
        vertex: String,
        d: i64,
        value: String,
    },

    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("ell = {ell} divides d = {d} of vertex `{vertex}`")]
    EllDividesD { vertex: String, d: i64, ell: u64 },

    #[error("exceptional configuration is not connected ({components} components)")]
    NotConnected { components: usize },

    #[error(
        "degree map H_0(E) -> Lambda is not surjective: ell = {ell} divides every residue degree"
    )]
    DegreeNotSurjective { ell: u64 },

    #[error("graph `{}` failed validation", .0.graph)]
    ValidationFailed(Box<ValidationReport>),

    #[error("singular point `{point}` failed validation")]
    PointValidationFailed {
        point: String,
        report: Box<ValidationReport>,
    },

    #[error("duplicate singular point id `{0}`")]
    DuplicatePoint(String),

    #[error("stratum `{label}` has delta = {delta}, expected 0, 1 or 2 on a surface")]
    InvalidDelta { label: String, delta: i64 },

    #[error("betti list has {0} entries, expected 5")]
    WrongLength(usize),

    #[error("unknown catalog graph `{0}`")]
    UnknownCatalogGraph(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
