//! Exact Fock-space evaluation of a circuit on a (signal, LO) pair with the
//! ancillas in vacuum, one total-photon sector at a time.

use nalgebra::DMatrix;

use fock_core::optics::PairTransfer;
use fock_core::{DensityOperator, ModeSpace, Operator, State, C64};

use crate::circuits::Detector;
use crate::dist::OutcomeDistribution;
use crate::DetectionError;

/// Probabilities below this are moved into the deficit instead of stored.
pub const PRUNE: f64 = 1e-30;

struct Sector<'a> {
    m: u32,
    /// Basis indices of the pair space in this sector.
    members: &'a [usize],
    /// Output tuples, flat.
    tuples: Vec<u32>,
    /// One amplitude column per member.
    cols: Vec<&'a [C64]>,
}

fn for_each_sector(
    space: &ModeSpace,
    det: Detector,
    mut f: impl FnMut(Sector<'_>) -> Result<(), DetectionError>,
) -> Result<(), DetectionError> {
    if space.mode_count() != 2 {
        return Err(DetectionError::InvalidInput("pair space must have two modes".into()));
    }
    let net = det.network();
    let mut pt = PairTransfer::new(net.row(0), net.row(1))?;
    for (m, members) in space.sectors() {
        let nas: Vec<u32> = members.iter().map(|&g| space.occupation(g)[0]).collect();
        let tuples = pt.basis(m).enumerate_flat();
        let cols = pt.sector_columns(m, &nas);
        f(Sector { m, members: &members, tuples, cols })?;
    }
    Ok(())
}

pub fn exact_distribution(pair: &State, det: Detector) -> Result<OutcomeDistribution, DetectionError> {
    let space = pair.space().clone();
    let w = det.counters();
    let mut counts = Vec::new();
    let mut probs = Vec::new();
    let mut pruned = 0.0;
    let (psi, rho) = match pair {
        State::Pure(p) => (Some(p.amplitudes().clone()), None),
        State::Mixed(d) => (None, Some(d.matrix().clone())),
    };
    for_each_sector(&space, det, |s| {
        let n_out = s.tuples.len() / w;
        for r in 0..n_out {
            let p = match (&psi, &rho) {
                (Some(v), _) => {
                    let a: C64 = s.members.iter().zip(&s.cols).map(|(&g, c)| c[r] * v[g]).sum();
                    a.norm_sqr()
                }
                (_, Some(m)) => {
                    let mut acc = C64::default();
                    for (&gi, ci) in s.members.iter().zip(&s.cols) {
                        if ci[r] == C64::default() {
                            continue;
                        }
                        let mut inner = C64::default();
                        for (&gj, cj) in s.members.iter().zip(&s.cols) {
                            inner += m[(gi, gj)] * cj[r].conj();
                        }
                        acc += ci[r] * inner;
                    }
                    acc.re
                }
                _ => unreachable!(),
            };
            if p < PRUNE {
                pruned += p.max(0.0);
                continue;
            }
            counts.extend_from_slice(&s.tuples[r * w..(r + 1) * w]);
            probs.push(p);
        }
        let _ = s.m;
        Ok(())
    })?;
    OutcomeDistribution::new(det, counts, probs, pair.deficit() + pruned)
}

/// O_h = sum_c h(c) Pi_c on the pair space, one operator per function.
pub fn exact_effective_operators(
    space: &ModeSpace,
    det: Detector,
    hs: &[&(dyn Fn(&[u32]) -> f64 + Sync)],
) -> Result<Vec<Operator>, DetectionError> {
    let d = space.dim();
    let w = det.counters();
    let mut ops = vec![DMatrix::<C64>::zeros(d, d); hs.len()];
    for_each_sector(space, det, |s| {
        let n_out = s.tuples.len() / w;
        let k = s.members.len();
        for (h, op) in hs.iter().zip(ops.iter_mut()) {
            let hv: Vec<f64> = (0..n_out).map(|r| h(&s.tuples[r * w..(r + 1) * w])).collect();
            for i in 0..k {
                for j in i..k {
                    let (ci, cj) = (s.cols[i], s.cols[j]);
                    let mut acc = C64::default();
                    for r in 0..n_out {
                        acc += ci[r].conj() * cj[r] * hv[r];
                    }
                    op[(s.members[i], s.members[j])] = acc;
                    op[(s.members[j], s.members[i])] = acc.conj();
                }
            }
        }
        Ok(())
    })?;
    let shared = space.clone().shared();
    Ok(ops.into_iter().map(|m| Operator::new(shared.clone(), m).expect("dimensions match")).collect())
}

/// Convenience for mixed inputs that are given as density operators.
pub fn exact_distribution_density(rho: &DensityOperator, det: Detector) -> Result<OutcomeDistribution, DetectionError> {
    exact_distribution(&State::Mixed(rho.clone()), det)
}
