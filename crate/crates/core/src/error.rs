use thiserror::Error;

/// Everything that can go wrong while building or evaluating a curve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("invalid {field}: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("insufficient liquidity: {token} balance {available} cannot cover {requested}")]
    InsufficientLiquidity {
        token: &'static str,
        requested: f64,
        available: f64,
    },

    #[error("trade leaves the curve segment: {coordinate} would become {value}, admissible range is [0, {limit}]")]
    BoundsExceeded {
        coordinate: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("state ({x}, {y}) is off the curve (relative residual {residual:e})")]
    OffCurve { x: f64, y: f64, residual: f64 },

    #[error("point (t_hat = {t_hat}, u_hat = {u_hat}) is off the unit hyperbola (residual {residual:e})")]
    OffUnitHyperbola {
        t_hat: f64,
        u_hat: f64,
        residual: f64,
    },

    #[error("invariant is indeterminate at the {0}")]
    Indeterminate(&'static str),

    #[error("quadrature did not converge within depth {max_depth} (error estimate {estimate:e})")]
    ConvergenceFailure { max_depth: u32, estimate: f64 },
}

impl CurveError {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        CurveError::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// Stable machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            CurveError::Domain { .. } => "DomainError",
            CurveError::InsufficientLiquidity { .. } => "InsufficientLiquidity",
            CurveError::BoundsExceeded { .. } => "BoundsExceeded",
            CurveError::OffCurve { .. } => "OffCurve",
            CurveError::OffUnitHyperbola { .. } => "OffCurve",
            CurveError::Indeterminate(_) => "Indeterminate",
            CurveError::ConvergenceFailure { .. } => "ConvergenceFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, CurveError>;
