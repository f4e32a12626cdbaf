use std::fmt;

use thiserror::Error;

/// Position of a parse error, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown attribute {0}")]
    UnknownAttribute(String),
    #[error("duplicate schema attribute {0}")]
    DuplicateAttribute(String),
    #[error("schema declares no attributes")]
    EmptySchema,
    #[error("schema has {0} attributes, at most 64 are supported")]
    TooManyAttributes(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("attribute set is not contained in schema {0}")]
    OutOfSchema(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("unknown attribute {0}")]
    UnknownAttribute(String),
    #[error("schema has {size} attributes, saturation cap is {cap}")]
    SchemaCapExceeded { size: usize, cap: usize },
    #[error("rule {rule}: {reason}")]
    RuleMismatch { rule: String, reason: String },
    #[error("unsupported constraint shape: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("search space too large: about {estimate:.3e} candidate relations, limit {limit:.3e}")]
    SearchTooLarge { estimate: f64, limit: f64 },
    #[error("chase round {round} would grow the prefix to {cells} cells, limit {limit}")]
    PrefixTooLarge { round: usize, cells: u128, limit: u128 },
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
