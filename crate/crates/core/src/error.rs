use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {value:e} ± {err:e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        err: f64,
        evaluations: usize,
    },
    #[error("truncation unstable: doubling T moved the value by {delta:e}")]
    TruncationUnstable { value: f64, delta: f64 },
    #[error("eigensolver failed to converge at index {0}")]
    Eigensolver(usize),
    #[error("lattice domain invalid: {0}")]
    Lattice(String),
    #[error("least-squares fit ill-conditioned: {0}")]
    Fit(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
