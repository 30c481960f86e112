//! Small numerical kernels shared by the solver crates.

pub mod fd;
pub mod fit;
pub mod quad;
pub mod root;
pub mod tridiag;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate}, error {error:e})")]
    QuadratureTolerance { tol: f64, estimate: f64, error: f64 },
    #[error("root not bracketed: f({lo}) = {flo}, f({hi}) = {fhi}")]
    NotBracketed { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("iteration budget of {0} exhausted")]
    MaxIterations(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, NumError>;
