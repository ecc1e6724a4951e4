//! Seeded batches of random, exactly representable states. The theorems
//! hold for every state, so any violation here is a bug.

use std::f64::consts::PI;

use detection::{Backend, IdealReadout, MultiInput, PairInput, PairReadout, HOM_SETTINGS};
use fock_core::random::{random_pure, seeded_rng, SeededRng};
use fock_core::{Exec, ModeSpace, State};
use rand::Rng;
use serde::Serialize;

use crate::{check_theorem1, check_theorem2, check_theorem3_6, check_theorem4, BoundConstants, MomentComparison};
use crate::{Result, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub states: usize,
    pub comparisons: Vec<MomentComparison>,
}

impl SuiteReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.comparisons.iter().filter(|c| c.verdict == v).count()
    }

    pub fn all_satisfied(&self) -> bool {
        !self.comparisons.is_empty() && self.comparisons.iter().all(|c| c.satisfied())
    }

    pub fn min_slack(&self) -> f64 {
        self.comparisons.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min)
    }
}

fn state(modes: usize, total: u32, seed: u64) -> Result<(State, SeededRng)> {
    let space = ModeSpace::simplex(modes, total)?.shared();
    let mut rng = seeded_rng(seed);
    let psi = random_pure(space, &mut rng)?;
    Ok((psi.into(), rng))
}

fn per_state<F>(n: usize, exec: Exec, f: F) -> Result<Vec<MomentComparison>>
where
    F: Fn(usize) -> Result<Vec<MomentComparison>> + Sync + Send,
{
    let parts = exec.map_range(0..n, f);
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Single-pair checks on random pure two-mode states with total photons <= 4,
/// at the four grid angles plus one random angle per state.
pub fn single_pair_suite(n: usize, seed: u64, consts: &BoundConstants, exec: Exec) -> Result<SuiteReport> {
    let comparisons = per_state(n, exec, |i| {
        let (s, mut rng) = state(2, 4, seed.wrapping_add(i as u64))?;
        let input = PairInput::Joint(s);
        let mut thetas = HOM_SETTINGS.to_vec();
        thetas.push(rng.random_range(0.0..2.0 * PI));
        let mut out = Vec::new();
        for t in thetas {
            out.extend(check_theorem1(&input, t, Backend::ExactFock, consts, Exec::Sequential)?);
            out.extend(check_theorem4(&input, t, Backend::ExactFock, consts, Exec::Sequential)?);
        }
        Ok(out)
    })?;
    Ok(SuiteReport { name: "single pair".into(), states: n, comparisons })
}

/// Two pairs on random pure four-mode states with total photons <= 4:
/// hom x hom, het x het and both mixed orders, random angles.
pub fn pair_suite(n: usize, seed: u64, consts: &BoundConstants, exec: Exec) -> Result<SuiteReport> {
    let comparisons = per_state(n, exec, |i| {
        let (s, mut rng) = state(4, 4, seed.wrapping_add(i as u64))?;
        let input = MultiInput::Joint { state: s, pairs: vec![[0, 1], [2, 3]] };
        let mut a = || rng.random_range(0.0..2.0 * PI);
        let kinds = [
            (PairReadout::Hom(a()), PairReadout::Hom(a())),
            (PairReadout::Het(a()), PairReadout::Het(a())),
            (PairReadout::Hom(a()), PairReadout::Het(a())),
            (PairReadout::Het(a()), PairReadout::Hom(a())),
        ];
        kinds
            .iter()
            .map(|&(rk, rl)| check_theorem2(&input, 0, rk, 1, rl, Backend::ExactFock, consts, Exec::Sequential))
            .collect()
    })?;
    Ok(SuiteReport { name: "pair correlations".into(), states: n, comparisons })
}

/// Ideal detector on mode 0 and an implemented pair on modes (1, 2), random
/// pure three-mode states with total photons <= 3, all four kind combinations.
pub fn hybrid_suite(n: usize, seed: u64, consts: &BoundConstants, exec: Exec) -> Result<SuiteReport> {
    let comparisons = per_state(n, exec, |i| {
        let (s, mut rng) = state(3, 3, seed.wrapping_add(i as u64))?;
        let input = MultiInput::Joint { state: s, pairs: vec![[1, 2]] };
        let mut a = || rng.random_range(0.0..2.0 * PI);
        let kinds = [
            (IdealReadout::Hom(a()), PairReadout::Hom(a())),
            (IdealReadout::Hom(a()), PairReadout::Het(a())),
            (IdealReadout::Het(a()), PairReadout::Het(a())),
            (IdealReadout::Het(a()), PairReadout::Hom(a())),
        ];
        kinds
            .iter()
            .map(|&(f, s)| check_theorem3_6(&input, 0, f, 0, s, Backend::ExactFock, consts, Exec::Sequential))
            .collect()
    })?;
    Ok(SuiteReport { name: "hybrid".into(), states: n, comparisons })
}
