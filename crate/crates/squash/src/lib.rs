//! The squashing map from a signal/LO pair to one mode, its adjoint, and
//! the ideal homodyne/heterodyne moment operators.

mod lo;
mod moments;

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use fock_core::error::{FockError, Result};
use fock_core::{DensityOperator, ModeSpace, Occupation, Operator, PureState, State, C64};

pub use lo::{lo_dressed_operator, lo_overlap_sums, squash_with_coherent_lo};
pub use moments::{het_moment_operator, ideal_hom_moments, HetMomentKind, HomMoments};

fn bad(msg: impl Into<String>) -> FockError {
    FockError::InvalidInput(msg.into())
}

/// Kraus operators M_m = sum_n |n><n, m-n| on the box [signal_cutoff, lo_cutoff].
#[derive(Clone, Debug)]
pub struct SquashKraus {
    input: ModeSpace,
    ops: Vec<DMatrix<C64>>,
}

impl SquashKraus {
    pub fn new(signal_cutoff: u32, lo_cutoff: u32) -> Result<Self> {
        let input = ModeSpace::boxed(&[signal_cutoff, lo_cutoff])?;
        let dv = signal_cutoff as usize + 1;
        let ops = (0..=signal_cutoff + lo_cutoff)
            .map(|m| {
                let mut k = DMatrix::zeros(dv, input.dim());
                for n in 0..=m.min(signal_cutoff) {
                    if let Some(j) = input.index_of(&[n, m - n]) {
                        k[(n as usize, j)] = C64::new(1.0, 0.0);
                    }
                }
                k
            })
            .collect();
        Ok(Self { input, ops })
    }

    pub fn input_space(&self) -> &ModeSpace {
        &self.input
    }

    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.ops
    }

    /// max |sum_m M_m^dag M_m - I| over entries.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.input.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for k in &self.ops {
            acc += k.adjoint() * k;
        }
        acc -= DMatrix::identity(d, d);
        acc.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kraus-sum application; the fast path is [`squash`].
    pub fn apply(&self, rho: &DensityOperator) -> Result<DMatrix<C64>> {
        if rho.space().basis() != self.input.basis() {
            return Err(bad("state space differs from the Kraus input box"));
        }
        let dv = self.ops.first().map_or(0, |k| k.nrows());
        let mut out = DMatrix::zeros(dv, dv);
        for k in &self.ops {
            out += k * rho.matrix() * k.adjoint();
        }
        Ok(out)
    }
}

/// Output space and basis projection for squashing modes (s, r) into one
/// mode that takes the place of s.
fn squashed_layout(space: &ModeSpace, s: usize, r: usize) -> Result<(ModeSpace, Vec<usize>, Vec<u32>)> {
    if s == r || s >= space.mode_count() || r >= space.mode_count() {
        return Err(bad("squash needs two distinct in-range modes"));
    }
    let keep = |occ: &[u32]| -> Occupation {
        occ.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &v)| v).collect()
    };
    let projected: Vec<Occupation> = space.basis().iter().map(|o| keep(o)).collect();
    let mut basis = projected.clone();
    basis.sort();
    basis.dedup();
    let cutoffs: Vec<u32> = keep(space.cutoffs());
    let out = ModeSpace::from_basis(&cutoffs, None, basis)?;
    let map = projected.iter().map(|o| out.index_of(o).expect("projected tuple present")).collect();
    let totals = space.basis().iter().map(|o| o[s] + o[r]).collect();
    Ok((out, map, totals))
}

/// (Lambda (x) id) applied to modes (s, r) of a multimode state. The output
/// mode takes s's position and r is removed.
pub fn squash_pair(rho: &DensityOperator, s: usize, r: usize) -> Result<DensityOperator> {
    let (out_space, map, totals) = squashed_layout(rho.space(), s, r)?;
    let mut sectors: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (g, &m) in totals.iter().enumerate() {
        sectors.entry(m).or_default().push(g);
    }
    let d = out_space.dim();
    let mut out = DMatrix::<C64>::zeros(d, d);
    let m = rho.matrix();
    for members in sectors.values() {
        for &a in members {
            for &b in members {
                out[(map[a], map[b])] += m[(a, b)];
            }
        }
    }
    DensityOperator::new(out_space.shared(), out, rho.trace_deficit())
}

/// Lambda on a two-mode (signal, LO) state.
pub fn squash(rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.space().mode_count() != 2 {
        return Err(bad("squash expects a two-mode state"));
    }
    squash_pair(rho, 0, 1)
}

pub fn squash_state(state: &State) -> Result<DensityOperator> {
    squash(&state.to_density())
}

pub fn squash_pure(psi: &PureState) -> Result<DensityOperator> {
    squash(&psi.to_density())
}

/// Lambda^dag(X) on the given pair space: <n,k|Lambda^dag X|n',k'> = X[n,n'] when n+k = n'+k'.
pub fn squash_adjoint(x: &Operator, pair_space: &ModeSpace) -> Result<Operator> {
    if pair_space.mode_count() != 2 || x.space().mode_count() != 1 {
        return Err(bad("adjoint maps a one-mode operator onto a two-mode space"));
    }
    if x.space().cutoffs()[0] < pair_space.cutoffs()[0] {
        return Err(bad("operator cutoff is below the signal cutoff of the pair space"));
    }
    let d = pair_space.dim();
    let xm = x.matrix();
    let mut out = DMatrix::<C64>::zeros(d, d);
    for (sector, members) in pair_space.sectors() {
        let _ = sector;
        for &a in &members {
            let na = pair_space.occupation(a)[0] as usize;
            for &b in &members {
                let nb = pair_space.occupation(b)[0] as usize;
                out[(a, b)] = xm[(na, nb)];
            }
        }
    }
    Operator::new(pair_space.clone().shared(), out)
}
