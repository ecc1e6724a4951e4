//! Truncated Fock spaces, states, operators and passive linear optics.

pub mod error;
pub mod operator;
pub mod optics;
pub mod par;
pub mod random;
pub mod space;
pub mod special;
pub mod state;

pub type C64 = num_complex::Complex64;

pub use error::{FockError, Result};
pub use operator::{expect_product, Operator};
pub use optics::{BsConvention, LinearNetwork, TruncationPolicy};
pub use par::Exec;
pub use space::{ModeSpace, Occupation, SectorBasis};
pub use state::{DensityOperator, PureState, State};
