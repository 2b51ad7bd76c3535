use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("corners do not interlace: {0}")]
    Ordering(String),

    #[error("length {length} is not a positive integer multiple of {unit} ({what})")]
    Incommensurable {
        what: String,
        length: f64,
        unit: f64,
    },

    #[error("evaluation at a pole u = {0}")]
    Singularity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix in {context}")]
    SingularMatrix { context: String },

    #[error("interlacing violated at h = {h}: gap {gap}")]
    Interlacing { h: usize, gap: f64 },

    #[error("eigensolver check failed: {0}")]
    Eigen(String),

    #[error("eigenvector labeling ambiguous: {0}")]
    Degeneracy(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
