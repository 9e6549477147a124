use thiserror::Error;

/// Errors raised by the numerical routines and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: correction norm {correction:.3e} exceeds {limit:.1e}")]
    NotHermitian { correction: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("function undefined on spectrum: {0}")]
    Domain(String),

    #[error("state is not faithful: smallest eigenvalue {min_eigenvalue:.3e} below floor {floor:.1e}")]
    Faithfulness { min_eigenvalue: f64, floor: f64 },

    #[error("trace {trace} differs from 1 by more than {tol:.1e}")]
    Trace { trace: f64, tol: f64 },

    #[error("vector is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("functional is not traceless: trace {0:.3e}")]
    NotTraceless(f64),

    #[error("exponent norm {norm:.3e} exceeds overflow guard {limit}")]
    Overflow { norm: f64, limit: f64 },

    #[error("majorization bound {bound:.6e} exceeds admitted threshold {threshold:.6e}")]
    Majorization { bound: f64, threshold: f64 },

    #[error("generator is a multiple of the identity")]
    ConstantGenerator,

    #[error("generators are not independent: smallest Gram eigenvalue {0:.3e}")]
    DependentGenerators(f64),

    #[error("expectation coordinates not attained: {0}")]
    NotAttained(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error stems from malformed or inadmissible input rather
    /// than from a numerical guard.
    pub fn is_input(&self) -> bool {
        !matches!(
            self,
            Error::Overflow { .. }
                | Error::Majorization { .. }
                | Error::NotAttained(_)
                | Error::Precondition(_)
                | Error::NoConvergence
        )
    }
}
