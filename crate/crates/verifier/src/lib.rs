//! Re-derives the ingredients of the deviation bounds from scratch: the
//! closed-form proof constants, diagonal matrix elements of the correction
//! operators, positivity of the 2x2 blocks the proofs reduce to, the scalar
//! lemmas, and the ladder-operator identities.
//!
//! Nothing here reuses the detector models of the `detection` crate; the
//! circuits are rebuilt from their mode relations so that the two can be
//! checked against each other.

pub mod appendix;
pub mod circuit;
pub mod constants;
pub mod diagonal;
pub mod families;
pub mod identities;
pub mod scalar;

use fock_core::FockError;

pub use appendix::{verify_appendix, AppendixReport, AppendixSettings};
pub use circuit::{antinormal, PairCircuit};
pub use constants::{eval_constants, ConstantCheck, ConstantId, ConstantsReport, ConstantsTable};
pub use diagonal::{check_diagonal_formulas, DiagonalFamily, DiagonalPoint, DiagonalReport};
pub use families::{check_submatrix_positivity, FamilyGrid, PositivityReport, SubmatrixFamily};
pub use identities::{check_operator_identities, IdentityCheck, IdentityReport};
pub use scalar::{check_scalar_inequalities, ScalarCheck, ScalarReport};

#[derive(Debug, thiserror::Error)]
pub enum VerifierError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}

pub type Result<T> = std::result::Result<T, VerifierError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(VerifierError::InvalidInput(msg.into()))
}
