use thiserror::Error;

/// Errors raised by the algebra, the engine and the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("element of Q(zeta_{order}) is not rational: nonzero coefficients {coeffs:?}")]
    NotRational { order: u64, coeffs: Vec<(usize, String)> },

    #[error("expected an integer, got {0}")]
    NotInteger(String),

    #[error("graded ring mismatch: {0}")]
    SpecMismatch(String),

    #[error("series argument must have zero constant term, got {0}")]
    NonzeroConstantTerm(String),

    #[error("element is not a unit: constant term vanishes")]
    NotAUnit,

    #[error("exterior power {power} exceeds rank {rank}")]
    RankTooSmall { rank: i64, power: usize },

    #[error("rank is not a nonnegative integer: {0}")]
    NonIntegerRank(String),

    #[error("twist {twist} is outside the oracle's valid range (twist >= 0)")]
    InvalidRange { twist: i64 },

    #[error("invalid stack: {0}")]
    InvalidStack(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// True for failures that indicate a bug in the engine rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotRational { .. }
                | Error::NotInteger(_)
                | Error::NotAUnit
                | Error::DivisionByZero
                | Error::SpecMismatch(_)
                | Error::NonzeroConstantTerm(_)
                | Error::RankTooSmall { .. }
                | Error::NonIntegerRank(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
