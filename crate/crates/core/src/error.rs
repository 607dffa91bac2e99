//! Error type shared across the library.
//!
//! Every variant carries a stable machine-readable code (see [`Error::code`])
//! so front-ends can map failures without parsing display strings.

use thiserror::Error;

/// Library-wide error enum.
#[derive(Debug, Error)]
pub enum Error {
    /// A self-loop `i i` appeared in an edge list.
    #[error("self-loop at node {node} (1-based); the network must be simple")]
    SelfLoop { node: usize },

    /// The same unordered node pair appeared twice in an edge list.
    #[error("duplicate edge {a}-{b} (1-based)")]
    DuplicateEdge { a: usize, b: usize },

    /// A node index outside `1..=n` appeared in an edge list.
    #[error("node index {index} outside 1..={n}")]
    NodeIndexOutOfRange { index: usize, n: usize },

    /// An edge weight outside the admissible range `(0, 1]` (or `!= 1` in
    /// unit-weight mode).
    #[error("edge {a}-{b} has weight {weight}; {reason}")]
    InvalidWeight {
        a: usize,
        b: usize,
        weight: f64,
        reason: &'static str,
    },

    /// A malformed line in a text input (edge list, matrix, gamma file, ...).
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// Two inputs that must agree in size do not.
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A scalar argument violated its documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A matrix expected to be symmetric deviates beyond tolerance.
    #[error("matrix not symmetric: max |M - M'| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },

    /// A matrix expected to be positive semi-definite has an eigenvalue below
    /// the negative tolerance.
    #[error(
        "matrix not positive semi-definite: min eigenvalue {min_eigenvalue:.6e} \
         below -{tolerance:.1e}"
    )]
    NotPositiveSemiDefinite { min_eigenvalue: f64, tolerance: f64 },

    /// A non-finite value (NaN or infinity) where finite data is required.
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    /// An input collection that must be non-empty is empty.
    #[error("empty input: {what}")]
    Empty { what: &'static str },

    /// Block resampling degenerates: `K_n = floor(n / delta_n) = 0`.
    #[error(
        "resample count K = floor(n/delta) is zero because the average block \
         size exceeds n; decrease the block radius"
    )]
    BlocksTooLarge,

    /// The dependence-coefficient sequence does not reach the largest distance
    /// class of the network and no explicit tail policy was chosen.
    #[error(
        "dependence sequence too short: need gamma up to distance class {needed}, \
         got {got}; supply more values or an explicit zero-tail policy"
    )]
    GammaTooShort { needed: usize, got: usize },

    /// Spectral-radius power iteration failed to converge.
    #[error("power iteration did not converge within {iterations} iterations")]
    PowerIterationDiverged { iterations: usize },

    /// An underlying I/O failure (file read/write).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code for this error, used verbatim in the CLI's
    /// JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SelfLoop { .. } => "self_loop",
            Error::DuplicateEdge { .. } => "duplicate_edge",
            Error::NodeIndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::Parse { .. } => "parse_error",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::NotPositiveSemiDefinite { .. } => "not_positive_semi_definite",
            Error::NonFinite { .. } => "non_finite",
            Error::Empty { .. } => "empty_input",
            Error::BlocksTooLarge => "blocks_too_large",
            Error::GammaTooShort { .. } => "gamma_too_short",
            Error::PowerIterationDiverged { .. } => "power_iteration_diverged",
            Error::Io(_) => "io_error",
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
