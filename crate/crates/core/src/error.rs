use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight spec: {0}")]
    InvalidSpec(String),

    #[error("invalid density grid: {0}")]
    InvalidDensity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("angular frequency {omega} lies outside the band [-{band_edge}, {band_edge}]")]
    OutOfBand { omega: f64, band_edge: f64 },

    /// The fitted (or supplied) inverse weight is not bounded away from zero.
    #[error("inverse weight G({omega}) = {value} is not strictly positive")]
    NonPositiveWeight { omega: f64, value: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    #[error(
        "Gram matrix is not numerically positive definite (pivot {pivot}, condition estimate {condition_estimate:e}); \
         consider a positive ridge_sigma2 or a spacing T >= 1/(2B)"
    )]
    NotPositiveDefinite { pivot: usize, condition_estimate: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The norm radius is smaller than the norm of the data-consistent interpolant.
    #[error("norm ball is empty: radius^2 = {radius_sq}, interpolant norm^2 = {norm_sq}")]
    InfeasibleBall { radius_sq: f64, norm_sq: f64 },

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that come from the numerics rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonPositiveWeight { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::InfeasibleBall { .. }
                | Error::Numerical(_)
        )
    }
}
