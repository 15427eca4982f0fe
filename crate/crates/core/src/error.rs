use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    /// A value list that has to close into a polygon is lopsided. `index` is the
    /// dominating entry; `column` is set when the list came from a matrix column.
    #[error("lopsided list: entry {index} exceeds the sum of the others{}", column.map(|c| format!(" (column {c})")).unwrap_or_default())]
    Lopsided { index: usize, column: Option<usize> },

    #[error("{what} exceeds the supported limit ({limit})")]
    Capability { what: String, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// A row block required by the patching construction has maximal phaseless rank.
    #[error("bound inapplicable: row block {block:?} has maximal phaseless rank")]
    BoundInapplicable { block: Vec<usize> },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid witness: {0}")]
    WitnessInvalid(String),

    /// Two routes that must agree did not. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
