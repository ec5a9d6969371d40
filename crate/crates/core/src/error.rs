use thiserror::Error;

use crate::Simplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("operation requires a nonempty complex")]
    EmptyComplex,
    #[error("simplex {0:?} is not a face of the complex")]
    FaceNotInComplex(Simplex),
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("second complex is not a subcomplex of the first")]
    NotASubcomplex,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(isize, isize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("unknown zoo entry `{0}`")]
    UnknownName(String),
    #[error("zoo reconstruction failed validation: {0}")]
    Reconstruction(String),
}

pub type Result<T, E = TopologyError> = std::result::Result<T, E>;
