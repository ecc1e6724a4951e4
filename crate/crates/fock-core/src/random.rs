//! Seeded random states for test suites.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::space::ModeSpace;
use crate::state::{DensityOperator, PureState};
use crate::C64;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state on the space.
pub fn random_pure<R: Rng>(space: Arc<ModeSpace>, rng: &mut R) -> Result<PureState> {
    let v = DVector::from_fn(space.dim(), |_, _| gaussian_c64(rng));
    PureState::normalized(space, v)
}

/// Random mixed state G G^dag / Tr, with G of shape dim x rank.
pub fn random_density<R: Rng>(space: Arc<ModeSpace>, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    if rank == 0 {
        return invalid("rank must be positive");
    }
    let g = DMatrix::from_fn(space.dim(), rank, |_, _| gaussian_c64(rng));
    let mut m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m /= C64::new(tr, 0.0);
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(space, m, 0.0)
}
