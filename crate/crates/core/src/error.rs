use thiserror::Error;

use crate::fock::Basis;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: series did not reach tolerance within {terms} terms")]
    Divergence { function: &'static str, terms: usize },

    #[error("{function}: pole at argument {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("Mellin-Barnes integrand has not decayed at the contour end (|f| = {tail:e})")]
    Contour { tail: f64 },

    #[error("{what}: adaptive refinement stalled")]
    NonConvergence { what: &'static str },

    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("state not normalisable at |z| = {z_abs}")]
    NotNormalizable { z_abs: f64 },

    #[error("truncation {truncation} too small: last amplitude carries {tail:e} of the norm")]
    TruncationTooSmall { truncation: usize, tail: f64 },

    #[error("operation not defined for coherent-state family {family}")]
    FamilyMismatch { family: &'static str },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("radial integrand at r_max = {r_max} is {value:e}, above the 1e-8 tail guard")]
    TailTooFat { r_max: f64, value: f64 },

    #[error("no closed-form matrix elements for basis {0:?}")]
    UnsupportedBasis(Basis),

    #[error("Wronskian vanishes at x = {x}")]
    SingularWronskian { x: f64 },

    #[error("operation requires the explicit fourth-order model")]
    UnsupportedModel,

    #[error("two-mode cutoff {cutoff} too small, {needed} levels required")]
    CutoffExceeded { needed: usize, cutoff: usize },

    #[error("half-line expansion recovered only {recovered} of the norm")]
    ExpansionResidualTooLarge { recovered: f64 },

    #[error("Gram matrix has negative eigenvalue {eigenvalue:e}")]
    GramNotPsd { eigenvalue: f64 },

    #[error("beam splitter with cos(theta/2) = 0 has no factorised form")]
    SingularSplitter,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
