use thiserror::Error;

use crate::numerics::{OdeError, QuadError, RootError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("admissibility violation in `{field}`: {reason}")]
    AdmissibilityViolation { field: &'static str, reason: String },

    /// F is required to be finite on `(lo, 0]` for bond prices to exist.
    #[error("F is not finite on ({lo}, 0]")]
    ConditionViolation { lo: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Bond prices stop existing past `max_x`.
    #[error("F(B(x)) is infinite beyond maturity {max_x}")]
    Finiteness { max_x: f64 },

    #[error("quasi-mean-reversion is zero")]
    LambdaZero,

    #[error("F is identically zero")]
    DegenerateF,

    #[error("forward-rate maximum lies beyond the solved horizon {x_max}")]
    HorizonTooShort { x_max: f64 },

    #[error("yield curve is not humped at r = {r}")]
    NotHumped { r: f64 },

    #[error("Delta = a - nu sigma^2/2 = {delta} is not zero")]
    DeltaNonZero { delta: f64 },

    #[error("no closed form available: {0}")]
    NotAvailable(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Finiteness { .. } | Error::HorizonTooShort { .. } | Error::Numerical(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::AdmissibilityViolation { .. } => "admissibility_violation",
            Error::ConditionViolation { .. } => "condition_violation",
            Error::Domain(_) => "domain_error",
            Error::Finiteness { .. } => "finiteness_error",
            Error::LambdaZero => "lambda_zero",
            Error::DegenerateF => "degenerate_f",
            Error::HorizonTooShort { .. } => "horizon_too_short",
            Error::NotHumped { .. } => "not_humped",
            Error::DeltaNonZero { .. } => "delta_non_zero",
            Error::NotAvailable(_) => "not_available",
            Error::Parameter(_) => "parameter_error",
            Error::Numerical(_) => "numerical_error",
        }
    }
}

impl From<QuadError> for Error {
    fn from(e: QuadError) -> Self {
        Error::Numerical(e.to_string())
    }
}

impl From<RootError> for Error {
    fn from(e: RootError) -> Self {
        Error::Numerical(e.to_string())
    }
}

impl From<OdeError> for Error {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::NonFinite { t } => Error::Finiteness { max_x: t },
            other => Error::Numerical(other.to_string()),
        }
    }
}
