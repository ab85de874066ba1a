use thiserror::Error;

/// Errors raised while reading a DIMACS CNF/WCNF instance.
///
/// Every variant carries the 1-based line number where the problem was detected.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing `p cnf` / `p wcnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header '{text}'")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token '{token}'")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: empty clause (literal 0 without preceding literals)")]
    EmptyClause { line: usize },
    #[error("line {line}: variable {var} exceeds declared variable count {num_vars}")]
    VarOutOfRange {
        line: usize,
        var: u64,
        num_vars: usize,
    },
    #[error("line {line}: header declares {expected} clauses but {found} were read")]
    ClauseCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: last clause is not terminated by 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: negative clause weight {weight}")]
    NegativeWeight { line: usize, weight: i64 },
    #[error("line {line}: clause weight {weight} exceeds top weight {top}")]
    WeightExceedsTop { line: usize, weight: u64, top: u64 },
}

/// Errors raised by the model, search and harness layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("hard clause {clause} has weight {weight}, not above the soft weight sum {soft_sum}")]
    HardDominance {
        clause: usize,
        weight: u64,
        soft_sum: u64,
    },
    #[error("assignment has length {found}, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment entry {index} is {value}, expected 0 or 1")]
    AssignmentValue { index: usize, value: u8 },
    #[error("formula has no variables")]
    NoVariables,
    #[error("variable {var} is out of range 1..={num_vars}")]
    VarOutOfRange { var: usize, num_vars: usize },
    #[error("variable {var} is already assigned")]
    AlreadyAssigned { var: usize },
    #[error("episode is incomplete: {assigned} of {num_vars} variables assigned")]
    IncompleteEpisode { assigned: usize, num_vars: usize },
    #[error("node has no children")]
    NoChildren,
    #[error("empty value list")]
    EmptyValues,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance has {num_vars} variables, above the brute-force guard {max_vars}")]
    OracleGuard { num_vars: usize, max_vars: usize },
    #[error("invalid result record: {0}")]
    Record(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
