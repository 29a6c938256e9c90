use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// Two inputs that must describe the same configuration do not.
    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("overflow evaluating {what} at Ha = {ha}; rescale or use the exp-scaled branch")]
    Overflow { what: &'static str, ha: f64 },

    /// Every candidate eigenvalue failed the reality filter. Carries the
    /// least-complex candidates for diagnosis.
    #[error("no real eigenvalue passed the filter; least-complex candidates: {candidates:?}")]
    NoRealEigenvalue { candidates: Vec<Complex64> },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The zero field has no energy ratio.
    #[error("excluded input: the trial field has zero dissipation")]
    ZeroDissipation,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
