use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Model-file errors carry the JSON path of the offending element so the
/// message can be traced back to the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("too many variables: {0} (at most {max} supported)", max = crate::varset::MAX_VARS)]
    TooManyVariables(usize),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("edges contain a directed cycle through `{0}`")]
    Cycle(String),
    #[error("ordering constraints contradict each other or the graph")]
    ContradictoryConstraints,
    #[error("variable sets overlap: {0}")]
    OverlappingSets(String),
    #[error("empty variable set: {0}")]
    EmptySet(&'static str),
    #[error("conditioning event has zero probability")]
    ZeroProbabilityEvidence,
    #[error("invalid value {value} for `{var}` (cardinality {cardinality})")]
    ValueOutOfRange { var: String, value: usize, cardinality: usize },
    #[error("models mix exact and floating-point probabilities")]
    MixedNumericModes,
    #[error("full-set CI enumeration refused for {0} variables (limit 6); use singleton-pair scope")]
    ScopeTooLarge(usize),
    #[error("enumeration refused: {0}")]
    EnumerationTooLarge(String),
    #[error("CI sets are over different variable universes")]
    UniverseMismatch,
    #[error("no faithful causal structure reproduces the given independences")]
    NoFaithfulStructure,
    #[error("role `{0}` is not declared by the model")]
    MissingRole(String),
    #[error("invalid axis: norm {0} is not 1")]
    NonUnitAxis(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("unknown case `{name}`; available: {available}")]
    UnknownCase { name: String, available: String },
    #[error("cannot parse statement `{0}`")]
    BadStatement(String),

    // Model-file errors.
    #[error("{path}: malformed JSON: {msg}")]
    Syntax { path: String, msg: String },
    #[error("{path}: malformed rational `{text}`")]
    MalformedRational { path: String, text: String },
    #[error("{path}: row of `{var}` sums to {sum}, expected 1")]
    RowSum { path: String, var: String, sum: String },
    #[error("{path}: negative probability in row of `{var}`")]
    NegativeProbability { path: String, var: String },
    #[error("{path}: CPT of `{var}` conditions on {found:?} but the graph parents are {expected:?}")]
    ParentMismatch { path: String, var: String, expected: Vec<String>, found: Vec<String> },
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    /// Stable short code for the error kind; used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownVariable(_) => "E-UNKNOWN-VAR",
            Error::DuplicateVariable(_) => "E-DUP-VAR",
            Error::TooManyVariables(_) => "E-TOO-MANY",
            Error::SelfLoop(_) => "E-SELF-LOOP",
            Error::Cycle(_) => "E-CYCLE",
            Error::ContradictoryConstraints => "E-CONSTRAINTS",
            Error::OverlappingSets(_) => "E-OVERLAP",
            Error::EmptySet(_) => "E-EMPTY",
            Error::ZeroProbabilityEvidence => "E-ZERO-EVIDENCE",
            Error::ValueOutOfRange { .. } => "E-VALUE",
            Error::MixedNumericModes => "E-MIXED-MODES",
            Error::ScopeTooLarge(_) => "E-SCOPE",
            Error::EnumerationTooLarge(_) => "E-ENUM-SIZE",
            Error::UniverseMismatch => "E-UNIVERSE",
            Error::NoFaithfulStructure => "E-NO-FAITHFUL",
            Error::MissingRole(_) => "E-ROLE",
            Error::NonUnitAxis(_) => "E-AXIS",
            Error::OutOfRange(_) => "E-RANGE",
            Error::UnknownCase { .. } => "E-CASE",
            Error::BadStatement(_) => "E-STATEMENT",
            Error::Syntax { .. } => "E-SYNTAX",
            Error::MalformedRational { .. } => "E-RATIONAL",
            Error::RowSum { .. } => "E-ROW-SUM",
            Error::NegativeProbability { .. } => "E-NEGATIVE",
            Error::ParentMismatch { .. } => "E-PARENTS",
            Error::Schema { .. } => "E-SCHEMA",
            Error::Io { .. } => "E-IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
