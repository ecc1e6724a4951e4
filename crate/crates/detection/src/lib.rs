//! Measurement models of the implemented homodyne and heterodyne circuits:
//! count distributions, outcome statistics, correction functionals and
//! joint multi-pair / hybrid expectations.

pub mod circuits;
pub mod coherent;
pub mod dist;
pub mod exact;
pub mod input;
pub mod joint;
pub mod poisson;
pub mod stats;

use fock_core::FockError;

pub use circuits::{shd_network, shed_network, Detector};
pub use coherent::{povm_compile_coherent_lo, CoherentLoPovm};
pub use dist::{sample_counts, OutcomeDistribution};
pub use input::{
    distribution, expectations, expected_statistic, het_moments, hom_moments, shd_distribution, shed_distribution,
    Backend, HetReport, HomReport, PairInput, Statistic,
};
pub use joint::{
    hybrid_statistics, pair_operators, pair_statistics, HybridCorrelation, IdealReadout, MultiInput, PairCorrelation,
    PairReadout,
};
pub use poisson::{HomSums, PoissonProduct};
pub use stats::*;

#[derive(Debug, thiserror::Error)]
pub enum DetectionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("backend failure: {0}")]
    BackendFailure(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}
