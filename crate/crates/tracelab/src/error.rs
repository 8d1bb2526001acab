use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e}, tolerance {tol:.3e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("singular matrix in fractional or negative power (min {min:.3e}, max {max:.3e})")]
    SingularPower { min: f64, max: f64 },

    #[error("Schatten exponent must be >= 1 or infinity (got {0})")]
    BadExponent(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("non-finite entry in matrix data")]
    NonFinite,

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid channel weights: {0}")]
    BadWeights(String),

    #[error("blocks do not partition the index set: {0}")]
    BadPartition(String),

    #[error("exponent quadruple violates 1/r0 = 1/r1 + 1/r2 + 1/r3 (residual {0:.3e})")]
    BadQuad(f64),

    #[error("input leaves the functional domain: {0}")]
    DomainViolation(String),

    #[error("channel is not unital (residual {0:.3e})")]
    NonUnitalChannel(f64),

    #[error("search exhausted its budget (best margin {best_margin:.3e})")]
    SearchExhausted { best_margin: f64 },

    #[error("invalid scalar function or measure: {0}")]
    BadFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
