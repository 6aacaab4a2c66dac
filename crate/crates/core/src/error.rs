use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension n = {n}: {reason}")]
    InvalidDimension { n: usize, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of the Robin chart at (alpha, beta) = (1, 0)")]
    RobinPole,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not tridiagonal")]
    NotTridiagonal,

    #[error("{0} failed to converge")]
    NonConvergence(&'static str),

    #[error("family index k = {k} out of range for n = {n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error(
        "no closed-form pseudometric P({k}) for n = {n} with lambda != 0 and gamma != 0: \
         only P(n-2), P(n-1), P(n) survive the cutoff"
    )]
    Cutoff { k: usize, n: usize },

    #[error("spectrum is not real and simple: {0}")]
    SpectrumNotRealSimple(String),

    #[error("numerical rank is ambiguous: singular value {value:.3e} lies within a factor 10 of tolerance {tol:.3e}")]
    RankAmbiguous { value: f64, tol: f64 },

    #[error("closed form failed residual certification ({residual:.3e})")]
    CertificationFailed { residual: f64 },

    #[error("metric candidate is not positive definite")]
    NotPositive,

    #[error("transition bracket failure: {0}")]
    BracketFailure(String),
}
