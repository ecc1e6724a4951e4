//! End-to-end uses of the certified intervals: interval covariance
//! matrices of squashed modes and an entanglement witness on top of them.

pub mod covariance;
pub mod demo;
pub mod interval;
pub mod witness;

pub use covariance::{estimate_covariance, measure, measure_pair, CovarianceInterval, CrossBlock, CrossData, DetectorData, ModeMoments, MomentInterval, PairData};
pub use demo::{designed_separable_states, entanglement_demo, separable_witness, thermal_state, tmsv_cutoff, DemoReport};
pub use interval::Interval;
pub use witness::{duan_witness, Criterion, WitnessResult, WitnessVerdict, WITNESS_TOLERANCE};

#[derive(Debug, thiserror::Error)]
pub enum ApplicationsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Detection(#[from] detection::DetectionError),
    #[error(transparent)]
    Fock(#[from] fock_core::FockError),
}

pub type Result<T> = std::result::Result<T, ApplicationsError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ApplicationsError::InvalidInput(msg.into()))
}
