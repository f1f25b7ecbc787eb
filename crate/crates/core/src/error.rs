use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("operator floor {floor} is above -1, residue is not available")]
    FloorTooHigh { floor: i64 },
    #[error("operator is not monic (leading coefficient is not 1)")]
    NotMonic,
    #[error("cannot take the normalized {n}-th root: {reason}")]
    NotNormalizable { n: u32, reason: String },
    #[error("successor case violated: {0}")]
    CaseViolation(String),
    #[error("Wronskian vanishes identically")]
    SingularWronskian,
    #[error("partition {partition} is not {n}-periodic")]
    NotPeriodic { partition: String, n: u32 },
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("tau-function must be a nonzero polynomial")]
    ZeroTau,
    #[error("operator is not a differential operator (has negative orders)")]
    NotDifferential,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
