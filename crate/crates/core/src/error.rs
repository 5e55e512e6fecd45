use crate::lp::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed shapes: mismatched lengths, bad partitions, empty coalitions.
    #[error("structural error: {0}")]
    Structure(String),
    /// A value outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// An operation whose hypotheses do not hold for this input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("n = {n} exceeds the partition cap {cap}; raise the cap to enumerate Bell({n}) partitions")]
    PartitionCap { n: usize, cap: usize },
    #[error("allocation rule {rule} hands out {total} > r = {stock} under partition {partition}")]
    RuleViolation {
        rule: String,
        partition: String,
        total: String,
        stock: String,
    },
    #[error("no instance for regime {regime} within {attempts} attempts")]
    GeneratorExhausted { regime: String, attempts: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear program: {0}")]
    Lp(#[from] LpError),
    /// The solver reported a status the model rules out (e.g. an unbounded
    /// coalition program on an instance that failed validation).
    #[error("unexpected LP status for {context}: {status:?}")]
    LpStatus {
        context: String,
        status: crate::lp::LpStatus,
    },
}
