use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Library errors. The `Display` form starts with a stable short token
/// (`empty-sample`, `oracle-size`, ...) which the CLI reports verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty-sample")]
    EmptySample,
    #[error("invalid-measure: {0}")]
    InvalidMeasure(String),
    #[error("quantile-domain: u = {0} is outside (0, 1)")]
    QuantileDomain(f64),
    #[error("null-event")]
    NullEvent,
    #[error("oracle-size: {0} atoms exceed the exhaustive limit of {1}")]
    OracleSize(usize, usize),
    #[error("statement-B-precondition: mass {bad_mass} of pairs at distance >= {eps} exceeds eps")]
    StatementBPrecondition { bad_mass: f64, eps: f64 },
    #[error("statement-C-precondition: mass {bad_mass} of atoms at distance >= {eps} exceeds eps")]
    StatementCPrecondition { bad_mass: f64, eps: f64 },
    #[error("atom-mismatch: {0}")]
    AtomMismatch(String),
    #[error("too-short: need at least 2 terms, got {0}")]
    TooShort(usize),
    #[error("bad-q: ratio bound must exceed 1, got {0}")]
    BadQ(f64),
    #[error("bad-parameter: {0}")]
    BadParameter(String),
    #[error("degenerate-coefficient")]
    DegenerateCoefficient,
    #[error("bad-block: block {block} does not divide {n}")]
    BadBlock { n: usize, block: usize },
    #[error("perm-size: {0}")]
    PermSize(String),
    #[error("precision-exhausted: frequency needs {needed} bits, precision is {bits}")]
    PrecisionExhausted { needed: u64, bits: u32 },
    #[error("outside-S")]
    OutsideS,
    #[error("plan-infeasible at k = {k}")]
    PlanInfeasible { k: usize },
    #[error("bad-mass: Γ₁ mass {bad_mass} exceeds eps level {eps}")]
    BadMass { bad_mass: f64, eps: f64 },
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// The leading token of the message, e.g. `"plan-infeasible"`.
    pub fn token(&self) -> &'static str {
        match self {
            Error::EmptySample => "empty-sample",
            Error::InvalidMeasure(_) => "invalid-measure",
            Error::QuantileDomain(_) => "quantile-domain",
            Error::NullEvent => "null-event",
            Error::OracleSize(..) => "oracle-size",
            Error::StatementBPrecondition { .. } => "statement-B-precondition",
            Error::StatementCPrecondition { .. } => "statement-C-precondition",
            Error::AtomMismatch(_) => "atom-mismatch",
            Error::TooShort(_) => "too-short",
            Error::BadQ(_) => "bad-q",
            Error::BadParameter(_) => "bad-parameter",
            Error::DegenerateCoefficient => "degenerate-coefficient",
            Error::BadBlock { .. } => "bad-block",
            Error::PermSize(_) => "perm-size",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::OutsideS => "outside-S",
            Error::PlanInfeasible { .. } => "plan-infeasible",
            Error::BadMass { .. } => "bad-mass",
            Error::Parse(_) => "parse",
        }
    }
}
