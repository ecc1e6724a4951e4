//! Operators on a [`ModeSpace`] and expectation values of local products.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::space::ModeSpace;
use crate::state::{group_by_rest, State};
use crate::C64;

#[derive(Clone, Debug)]
pub struct Operator {
    space: Arc<ModeSpace>,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(space: Arc<ModeSpace>, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return invalid("operator matrix does not match the space dimension");
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn identity(space: Arc<ModeSpace>) -> Self {
        let d = space.dim();
        Self { space, matrix: DMatrix::identity(d, d) }
    }

    pub fn diagonal(space: Arc<ModeSpace>, f: impl Fn(&[u32]) -> f64) -> Self {
        let d = space.dim();
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = C64::new(f(space.occupation(i)), 0.0);
        }
        Self { space, matrix: m }
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * s }
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        if self.space.dim() != other.space.dim() {
            return invalid("operators live on different spaces");
        }
        Ok(Self { space: self.space.clone(), matrix: &self.matrix + &other.matrix })
    }

    /// Tr[O rho], full-space operator.
    pub fn expect(&self, state: &State) -> Result<C64> {
        expect_product(state, &[(&all_modes(state), self)])
    }
}

fn all_modes(state: &State) -> Vec<usize> {
    (0..state.space().mode_count()).collect()
}

fn single_mode(cutoff: u32, f: impl Fn(usize, usize) -> C64) -> Operator {
    let space = ModeSpace::single(cutoff).shared();
    let d = cutoff as usize + 1;
    Operator { space, matrix: DMatrix::from_fn(d, d, f) }
}

pub fn number_operator(cutoff: u32) -> Operator {
    single_mode(cutoff, |i, j| if i == j { C64::new(i as f64, 0.0) } else { C64::default() })
}

pub fn annihilation(cutoff: u32) -> Operator {
    single_mode(cutoff, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::default() })
}

/// x(theta) = (a e^{-i theta} + a^dag e^{i theta}) / 2, so [x(0), x(pi/2)] = i/2.
pub fn quadrature_operator(theta: f64, cutoff: u32) -> Operator {
    single_mode(cutoff, |i, j| {
        if j == i + 1 {
            C64::from_polar((j as f64).sqrt() / 2.0, -theta)
        } else if i == j + 1 {
            C64::from_polar((i as f64).sqrt() / 2.0, theta)
        } else {
            C64::default()
        }
    })
}

/// x(theta)^2 from its exact matrix elements; squaring a truncated x
/// would corrupt the last diagonal entry.
pub fn quadrature_squared(theta: f64, cutoff: u32) -> Operator {
    single_mode(cutoff, |i, j| {
        let (lo, hi) = (i.min(j) as f64, i.max(j));
        if i == j {
            C64::new((2.0 * lo + 1.0) / 4.0, 0.0)
        } else if hi == i.min(j) + 2 {
            let mag = ((lo + 1.0) * (lo + 2.0)).sqrt() / 4.0;
            C64::from_polar(mag, if j > i { -2.0 * theta } else { 2.0 * theta })
        } else {
            C64::default()
        }
    })
}

/// (x p + p x)/2 = i (a^dag^2 - a^2) / 4.
pub fn symmetrized_xp(cutoff: u32) -> Operator {
    single_mode(cutoff, |i, j| {
        if i == j + 2 {
            C64::new(0.0, ((j as f64 + 1.0) * (j as f64 + 2.0)).sqrt() / 4.0)
        } else if j == i + 2 {
            C64::new(0.0, -((i as f64 + 1.0) * (i as f64 + 2.0)).sqrt() / 4.0)
        } else {
            C64::default()
        }
    })
}

/// Tr[(A_1 (x) A_2 (x) ... (x) 1) rho] where A_f acts on the listed modes of
/// the state. An operator's space must contain every sub-tuple that occurs;
/// entries outside it are treated as zero.
pub fn expect_product(state: &State, factors: &[(&[usize], &Operator)]) -> Result<C64> {
    let space = state.space();
    let mut seen = vec![false; space.mode_count()];
    for (modes, op) in factors {
        if modes.len() != op.space.mode_count() {
            return invalid("factor mode list does not match its operator");
        }
        for &m in modes.iter() {
            if m >= seen.len() || seen[m] {
                return invalid(format!("mode {m} is repeated or out of range"));
            }
            seen[m] = true;
        }
    }
    let rest: Vec<usize> = (0..space.mode_count()).filter(|&m| !seen[m]).collect();
    // Local index of each basis state in each factor; None if outside.
    let local: Vec<Vec<Option<usize>>> = factors
        .iter()
        .map(|(modes, op)| {
            (0..space.dim())
                .map(|g| {
                    let occ = space.occupation(g);
                    let t: Vec<u32> = modes.iter().map(|&m| occ[m]).collect();
                    op.space.index_of(&t)
                })
                .collect()
        })
        .collect();
    if let State::Pure(p) = state {
        if let Some(v) = pure_tensor_path(p.amplitudes().as_slice(), factors, &local, space, &rest) {
            return Ok(v);
        }
    }
    let groups = group_by_rest(space, &rest);
    let mut acc = C64::default();
    match state {
        State::Pure(p) => {
            let psi = p.amplitudes();
            for members in &groups {
                for &g in members {
                    if psi[g] == C64::default() {
                        continue;
                    }
                    for &h in members {
                        if psi[h] == C64::default() {
                            continue;
                        }
                        if let Some(v) = factor_element(factors, &local, g, h) {
                            acc += psi[g].conj() * v * psi[h];
                        }
                    }
                }
            }
        }
        State::Mixed(d) => {
            let rho = d.matrix();
            for members in &groups {
                for &g in members {
                    for &h in members {
                        let r = rho[(h, g)];
                        if r == C64::default() {
                            continue;
                        }
                        if let Some(v) = factor_element(factors, &local, g, h) {
                            acc += v * r;
                        }
                    }
                }
            }
        }
    }
    Ok(acc)
}

const TENSOR_LIMIT: usize = 40_000_000;

/// Embed psi in the product of the factor spaces and the rest groups, apply
/// each factor along its axis, and take the overlap. Cost is the embedded
/// size times the sum of factor dimensions rather than dim^2.
fn pure_tensor_path(
    psi: &[C64],
    factors: &[(&[usize], &Operator)],
    local: &[Vec<Option<usize>>],
    space: &ModeSpace,
    rest: &[usize],
) -> Option<C64> {
    let mut rest_id: std::collections::HashMap<Vec<u32>, usize> = Default::default();
    let rid: Vec<usize> = (0..space.dim())
        .map(|g| {
            let key: Vec<u32> = rest.iter().map(|&m| space.occupation(g)[m]).collect();
            let n = rest_id.len();
            *rest_id.entry(key).or_insert(n)
        })
        .collect();
    let mut dims: Vec<usize> = factors.iter().map(|(_, op)| op.space.dim()).collect();
    dims.push(rest_id.len());
    let total = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d))?;
    if total > TENSOR_LIMIT {
        return None;
    }
    let mut t = vec![C64::default(); total];
    'basis: for (g, &a) in psi.iter().enumerate() {
        if a == C64::default() {
            continue;
        }
        let mut idx = 0;
        for (f, d) in dims.iter().enumerate().take(factors.len()) {
            let Some(l) = local[f][g] else { continue 'basis };
            idx = idx * d + l;
        }
        idx = idx * dims[factors.len()] + rid[g];
        t[idx] = a;
    }
    let psi_t = t.clone();
    for (f, (_, op)) in factors.iter().enumerate() {
        let d = dims[f];
        let stride: usize = dims[f + 1..].iter().product();
        let outer: usize = dims[..f].iter().product();
        let mut out = vec![C64::default(); total];
        for o in 0..outer {
            let base = o * d * stride;
            for i_out in 0..d {
                let dst = base + i_out * stride;
                for i_in in 0..d {
                    let a = op.matrix[(i_out, i_in)];
                    if a == C64::default() {
                        continue;
                    }
                    let src = base + i_in * stride;
                    for s in 0..stride {
                        out[dst + s] += a * t[src + s];
                    }
                }
            }
        }
        t = out;
    }
    Some(psi_t.iter().zip(&t).map(|(a, b)| a.conj() * b).sum())
}

#[inline]
fn factor_element(
    factors: &[(&[usize], &Operator)],
    local: &[Vec<Option<usize>>],
    g: usize,
    h: usize,
) -> Option<C64> {
    let mut v = C64::new(1.0, 0.0);
    for (f, (_, op)) in factors.iter().enumerate() {
        let (Some(a), Some(b)) = (local[f][g], local[f][h]) else {
            return None;
        };
        v *= op.matrix[(a, b)];
        if v == C64::default() {
            return None;
        }
    }
    Some(v)
}
