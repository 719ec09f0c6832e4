use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input outside the domain of the operation.
    #[error("{reason}")]
    Domain { field: &'static str, reason: String },

    #[error("allocation covers {got} families but the portfolio has {expected}")]
    AllocationMismatch { expected: usize, got: usize },

    #[error("duplicate task family id {0}")]
    DuplicateFamily(u64),

    #[error("duplicate panel record for family {family} at period {period}")]
    DuplicateRecord { family: u64, period: u64 },

    #[error("{0} is empty")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}

/// Fails unless `value` is finite and lies strictly inside `(lo, hi)`.
pub fn open_interval(field: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value > lo && value < hi {
        Ok(value)
    } else {
        Err(Error::domain(field, format!("{field} must lie in ({lo},{hi}), got {value}")))
    }
}

pub fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(field, format!("{field} must be positive and finite, got {value}")))
    }
}

pub fn non_negative(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(field, format!("{field} must be non-negative and finite, got {value}")))
    }
}
