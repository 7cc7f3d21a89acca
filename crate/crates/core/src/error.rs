use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeilbronnError {
    #[error("degenerate instance: need at least 3 points, got {0}")]
    DegenerateInstance(usize),
    #[error("bounding box has zero width or height")]
    DegenerateBoundingBox,
    #[error("coordinate {value} lies outside the unit square")]
    OutOfUnitSquare { value: f64 },
    #[error("no known configuration for n = {0}")]
    UnknownInstance(usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("export unsupported: {0}")]
    ExportUnsupported(String),
    #[error("LP parse error at line {line}: {message}")]
    LpParse { line: usize, message: String },
    #[error("oracle enumeration too large: {0} subsets")]
    OracleTooLarge(u128),
}

pub type Result<T> = std::result::Result<T, HeilbronnError>;
