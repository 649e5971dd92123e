use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{routine} did not converge within {iterations} iterations")]
    NotConverged { routine: &'static str, iterations: usize },

    #[error("selection splits the conjugate pair {0} / {1}")]
    SplitConjugatePair(Complex64, Complex64),

    #[error("Schur block swap at position {position} is ill-conditioned (residual {residual:.3e})")]
    SwapFailed { position: usize, residual: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("Lyapunov equation has no unique solution: eigenvalues {0} and {1} sum to zero")]
    NoUniqueLyapunovSolution(Complex64, Complex64),

    #[error("integral representation does not converge: spectral abscissa {abscissa} is not negative")]
    DivergentIntegral { abscissa: f64 },

    #[error("Lyapunov solution of the trailing Schur block is singular")]
    SingularBlock,

    #[error("measure e^<x,Sx> dx is not finite: S is not negative definite")]
    MeasureNotFinite,

    #[error("trajectory diverged on path {path} at step {step}")]
    DivergedTrajectory { path: usize, step: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Variant name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Precondition(_) => "Precondition",
            Error::NotConverged { .. } => "NotConverged",
            Error::SplitConjugatePair(..) => "SplitConjugatePair",
            Error::SwapFailed { .. } => "SwapFailed",
            Error::Singular => "Singular",
            Error::NoUniqueLyapunovSolution(..) => "NoUniqueLyapunovSolution",
            Error::DivergentIntegral { .. } => "DivergentIntegral",
            Error::SingularBlock => "SingularBlock",
            Error::MeasureNotFinite => "MeasureNotFinite",
            Error::DivergedTrajectory { .. } => "DivergedTrajectory",
            Error::Numerical(_) => "Numerical",
        }
    }

    /// True for caller errors such as bad shapes or violated preconditions.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch(_) | Error::Precondition(_) | Error::SplitConjugatePair(..)
        )
    }
}
