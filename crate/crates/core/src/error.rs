use thiserror::Error;

/// Failures raised by the analysis and construction pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TomoError {
    #[error("line sums are inconsistent: no binary image has these projections")]
    Inconsistent,

    #[error("line sums determine a unique image")]
    NotAmbiguous,

    #[error("no column pairs exist: alpha is zero")]
    EmptyAmbiguity,

    #[error("image dimensions differ: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("illegal move in row {row}: {reason}")]
    IllegalMove { row: usize, reason: String },

    #[error("construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),

    #[error("enumeration was truncated at {cap} solutions; audits require a complete enumeration")]
    TruncatedEnumeration { cap: usize },

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl TomoError {
    /// Domain errors describe the line sums themselves, as opposed to malformed input.
    pub fn is_domain(&self) -> bool {
        !matches!(self, TomoError::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, TomoError>;
