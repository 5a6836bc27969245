use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),
    #[error("basis element {atom} is not valid here: {reason}")]
    InvalidAtom { atom: String, reason: String },
    #[error("factor set of length {length} could not be certified within a prefix of {budget} letters")]
    UncertifiedFactors { length: usize, budget: usize },
    #[error("degree {n} exceeds the hard cap {cap} for {what}; pass a cap override to proceed (estimated {estimate})")]
    CapExceeded {
        n: usize,
        cap: usize,
        what: &'static str,
        estimate: String,
    },
    #[error("invalid partition {0}")]
    InvalidPartition(String),
    #[error("multiplicity inversion produced a non-admissible value {value} for {partition}")]
    NegativeMultiplicity { partition: String, value: i64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tableau precondition failed: {0}")]
    Tableau(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
