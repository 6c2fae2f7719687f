use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an exact rational: {0:?} (expected a/b)")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable {var} out of range for universe of size {n}")]
    VarOutOfRange { var: usize, n: usize },
    #[error("variable {var} appears twice in a term")]
    DuplicateVar { var: usize },
    #[error("term width {width} exceeds r = {r}")]
    TooWide { width: usize, r: usize },
    #[error("restriction has {got} values, universe has {n}")]
    UniverseMismatch { got: usize, n: usize },
    #[error("assignment to variable {var} which is already set")]
    AlreadySet { var: usize },
    #[error("blocks do not partition the universe: {0}")]
    BadBlocks(String),
    #[error("bad restriction symbol {0:?}")]
    BadSymbol(char),
    #[error("not a partial injection: {0}")]
    NotInjective(String),
}

/// Text-format error with a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is outside [0, 1]")]
    NotAProbability { name: &'static str, value: String },
    #[error("size guard: {what} = {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("restriction is not in the failure set (tree depth < {s})")]
    NotInFailureSet { s: usize },
    #[error("s must be at least 1")]
    ZeroDepth,
    #[error("index bound l = {l} is below 1; out of the lemma's regime")]
    OutOfRegime { l: String },
    #[error("{what} = {size} is not below the index bound {bound}")]
    IndexBound {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("witness rejected at round {round}: {reason}")]
    Decode { round: usize, reason: String },
    #[error("malformed witness text, line {line}: {message}")]
    Text { line: usize, message: String },
}

impl CodecError {
    pub(crate) fn decode(round: usize, reason: impl Into<String>) -> Self {
        CodecError::Decode {
            round,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree depth exceeds materialization cap {cap}")]
    TooDeep { cap: usize },
}
