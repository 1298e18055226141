use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot normalize zero")]
    ZeroPolynomial,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("polynomial mentions {0}, which is not a root variable of the requested degree")]
    NonRootVariable(String),

    #[error("polynomial mentions {0}, which is not a coefficient variable of the requested degree")]
    NonCoefficientVariable(String),

    #[error("polynomial is not symmetric: not invariant under swapping l{0} and l{1}")]
    NotSymmetric(usize, usize),

    #[error("no coincidence constraint: partition {0} has no part larger than 1")]
    TrivialPartition(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("polynomial is not homogeneous in the coefficients")]
    MixedDegree,

    #[error("the zero form has no roots")]
    ZeroForm,

    #[error("parse error: {0}")]
    Parse(String),
}
