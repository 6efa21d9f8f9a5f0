use alloc::string::String;

use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("elements live in different algebras")]
    AmbientMismatch,
    #[error("matrix is not in {algebra} (residual {residual})")]
    NotInAlgebra { algebra: String, residual: Q },
    #[error("element is not in the noncompact part p")]
    NotInP,
    #[error("descriptor mismatch: {0} vs {1}")]
    DescriptorMismatch(String, String),
    #[error("incompatible target families: {0}")]
    IncompatibleFamilies(String),
    #[error("not a homomorphism (residual {0})")]
    NotHomomorphism(Q),
    #[error("input is not tight")]
    NotTight,
    #[error("input is not positive")]
    NotPositive,
    #[error("decomposition is not complete: {0}")]
    Incomplete(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
