//! Passive linear optics in the Fock basis.
//!
//! A network is stored as its creation map: input mode `q` sends
//! `a_q^dag -> sum_k v[(q, k)] b_k^dag`. Coherent amplitudes then propagate as
//! `gamma_k = sum_q v[(q, k)] alpha_q`.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, FockError, Result};
use crate::space::SectorBasis;
use crate::state::{DensityOperator, PureState, State};
use crate::C64;

/// Sign placement of a balanced beamsplitter acting in place on slots (i, j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BsConvention {
    /// a_i -> (b_i - b_j)/sqrt2, a_j -> (b_i + b_j)/sqrt2
    SignFlipFirst,
    /// a_i -> (b_i + b_j)/sqrt2, a_j -> (b_j - b_i)/sqrt2
    SignFlipSecond,
    /// a_i -> (b_i + b_j)/sqrt2, a_j -> (b_i - b_j)/sqrt2
    Symmetric,
}

impl BsConvention {
    /// Rows are inputs (i, j), columns outputs (i, j).
    pub fn matrix(self) -> [[f64; 2]; 2] {
        let s = FRAC_1_SQRT_2;
        match self {
            BsConvention::SignFlipFirst => [[s, -s], [s, s]],
            BsConvention::SignFlipSecond => [[s, s], [-s, s]],
            BsConvention::Symmetric => [[s, s], [s, -s]],
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            BsConvention::SignFlipFirst => BsConvention::SignFlipSecond,
            BsConvention::SignFlipSecond => BsConvention::SignFlipFirst,
            BsConvention::Symmetric => BsConvention::Symmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearNetwork {
    v: DMatrix<C64>,
}

impl LinearNetwork {
    pub fn identity(modes: usize) -> Self {
        Self { v: DMatrix::identity(modes, modes) }
    }

    pub fn from_matrix(v: DMatrix<C64>) -> Self {
        Self { v }
    }

    pub fn modes(&self) -> usize {
        self.v.nrows()
    }

    pub fn beamsplitter(mut self, i: usize, j: usize, conv: BsConvention) -> Self {
        let b = conv.matrix();
        for q in 0..self.v.nrows() {
            let (vi, vj) = (self.v[(q, i)], self.v[(q, j)]);
            self.v[(q, i)] = vi * b[0][0] + vj * b[1][0];
            self.v[(q, j)] = vi * b[0][1] + vj * b[1][1];
        }
        self
    }

    pub fn phase(mut self, k: usize, theta: f64) -> Self {
        let e = C64::from_polar(1.0, theta);
        for q in 0..self.v.nrows() {
            self.v[(q, k)] *= e;
        }
        self
    }

    /// Relabel outputs: new output `r` is old slot `order[r]`.
    pub fn reorder_outputs(&self, order: &[usize]) -> Self {
        Self { v: DMatrix::from_fn(self.v.nrows(), order.len(), |q, r| self.v[(q, order[r])]) }
    }

    pub fn creation_map(&self) -> &DMatrix<C64> {
        &self.v
    }

    pub fn row(&self, input: usize) -> Vec<C64> {
        self.v.row(input).iter().copied().collect()
    }

    pub fn propagate_coherent(&self, alphas: &[C64]) -> Vec<C64> {
        (0..self.v.ncols())
            .map(|k| alphas.iter().enumerate().map(|(q, a)| self.v[(q, k)] * a).sum())
            .collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let p = &self.v * self.v.adjoint();
        let d = p - DMatrix::<C64>::identity(self.v.nrows(), self.v.nrows());
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Degree-indexed tables of output tuples for a fixed output mode count.
#[derive(Debug)]
pub struct ExpansionTables {
    k: usize,
    bases: Vec<SectorBasis>,
    flats: Vec<Vec<u32>>,
}

impl ExpansionTables {
    pub fn new(k: usize) -> Self {
        Self { k, bases: Vec::new(), flats: Vec::new() }
    }

    pub fn modes(&self) -> usize {
        self.k
    }

    fn ensure(&mut self, m: u32) {
        while self.bases.len() <= m as usize {
            let b = SectorBasis::new(self.k, self.bases.len() as u32);
            self.flats.push(b.enumerate_flat());
            self.bases.push(b);
        }
    }

    pub fn basis(&mut self, m: u32) -> &SectorBasis {
        self.ensure(m);
        &self.bases[m as usize]
    }

    /// Degree-`m` tuples in rank order, flattened.
    pub fn tuples(&mut self, m: u32) -> &[u32] {
        self.ensure(m);
        &self.flats[m as usize]
    }

    /// Apply (sum_p row[p] b_p^dag) / sqrt(norm) to a degree-`m` polynomial in
    /// normalized Fock amplitudes.
    pub fn create(&mut self, poly: &[C64], m: u32, row: &[C64], norm: f64) -> Vec<C64> {
        self.ensure(m + 1);
        let k = self.k;
        let next = &self.bases[m as usize + 1];
        let flat = &self.flats[m as usize];
        let mut out = vec![C64::default(); next.len()];
        let inv = 1.0 / norm.sqrt();
        let active: Vec<usize> = (0..k).filter(|&p| row[p] != C64::default()).collect();
        let mut t = vec![0u32; k];
        for (idx, &c) in poly.iter().enumerate() {
            if c == C64::default() {
                continue;
            }
            t.copy_from_slice(&flat[idx * k..(idx + 1) * k]);
            for &p in &active {
                let e = t[p];
                t[p] += 1;
                let r = next.rank(&t);
                t[p] = e;
                out[r] += c * row[p] * (((e + 1) as f64).sqrt() * inv);
            }
        }
        out
    }

    /// Output amplitudes of prod_q (a_q^dag)^{n_q}/sqrt(n_q!) |0>, indexed by
    /// the returned degree's sector basis.
    pub fn expand(&mut self, v: &DMatrix<C64>, occ: &[u32]) -> (u32, Vec<C64>) {
        let mut poly = vec![C64::new(1.0, 0.0)];
        let mut deg = 0;
        for (q, &n) in occ.iter().enumerate() {
            let row: Vec<C64> = v.row(q).iter().copied().collect();
            for c in 1..=n {
                poly = self.create(&poly, deg, &row, c as f64);
                deg += 1;
            }
        }
        (deg, poly)
    }
}

/// What to do when a transformation leaves the truncated space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationPolicy {
    /// Fail if more than 1e-14 of the norm leaves the space.
    Strict,
    /// Add the lost norm to the state's deficit.
    TrackDeficit,
}

fn bs_sector(tables: &mut ExpansionTables, conv: BsConvention, t: u32) -> DMatrix<C64> {
    let b = conv.matrix();
    let v = DMatrix::from_fn(2, 2, |r, c| C64::new(b[r][c], 0.0));
    let size = t as usize + 1;
    let mut u = DMatrix::zeros(size, size);
    for ni in 0..=t {
        let (deg, amps) = tables.expand(&v, &[ni, t - ni]);
        debug_assert_eq!(deg, t);
        let basis = tables.basis(t).clone();
        for (r, a) in amps.iter().enumerate() {
            let k = basis.unrank(r)[0];
            u[(k as usize, ni as usize)] = *a;
        }
    }
    u
}

/// Sparse in-space action of a two-mode sector-block map plus the norm it
/// sends outside the space.
fn two_mode_kernel(
    state: &State,
    i: usize,
    j: usize,
    block: &mut dyn FnMut(u32) -> DMatrix<C64>,
) -> Result<Vec<Vec<(usize, C64)>>> {
    let space = state.space();
    if i == j || i >= space.mode_count() || j >= space.mode_count() {
        return invalid("beamsplitter needs two distinct modes in range");
    }
    let mut cache: HashMap<u32, DMatrix<C64>> = HashMap::new();
    let mut cols = Vec::with_capacity(space.dim());
    for g in 0..space.dim() {
        let occ = space.occupation(g);
        let (ni, nj) = (occ[i], occ[j]);
        let t = ni + nj;
        let u = cache.entry(t).or_insert_with(|| block(t));
        let mut col = Vec::new();
        let mut target = occ.to_vec();
        for k in 0..=t {
            let z = u[(k as usize, ni as usize)];
            if z == C64::default() {
                continue;
            }
            target[i] = k;
            target[j] = t - k;
            // usize::MAX marks an out-of-space target.
            col.push((space.index_of(&target).unwrap_or(usize::MAX), z));
        }
        cols.push(col);
    }
    Ok(cols)
}

fn apply_kernel(state: &State, cols: &[Vec<(usize, C64)>], policy: TruncationPolicy) -> Result<State> {
    let space = state.space().clone();
    let d = space.dim();
    let out = match state {
        State::Pure(p) => {
            let psi = p.amplitudes();
            let mut out = DVector::<C64>::zeros(d);
            for (g, col) in cols.iter().enumerate() {
                if psi[g] == C64::default() {
                    continue;
                }
                // The map is unitary on the full space, so what leaves shows up
                // as a norm drop below.
                for &(t, z) in col {
                    if t != usize::MAX {
                        out[t] += z * psi[g];
                    }
                }
            }
            let lost = (p.norm_sqr() - out.norm_squared()).max(0.0);
            check_loss(lost, policy)?;
            State::Pure(PureState::from_parts(space, out, p.norm_deficit() + lost))
        }
        State::Mixed(rho) => {
            let mut k = DMatrix::<C64>::zeros(d, d);
            for (g, col) in cols.iter().enumerate() {
                for &(t, z) in col {
                    if t != usize::MAX {
                        k[(t, g)] += z;
                    }
                }
            }
            let m = &k * rho.matrix() * k.adjoint();
            let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
            let lost = (rho.trace() - tr).max(0.0);
            check_loss(lost, policy)?;
            State::Mixed(DensityOperator::from_parts(space, m, rho.trace_deficit() + lost))
        }
    };
    Ok(out)
}

fn check_loss(lost: f64, policy: TruncationPolicy) -> Result<()> {
    if policy == TruncationPolicy::Strict && lost > 1e-14 {
        return Err(FockError::TruncationOverflow { lost });
    }
    Ok(())
}

pub fn apply_beamsplitter(
    state: &State,
    i: usize,
    j: usize,
    conv: BsConvention,
    policy: TruncationPolicy,
) -> Result<State> {
    let mut tables = ExpansionTables::new(2);
    let cols = two_mode_kernel(state, i, j, &mut |t| bs_sector(&mut tables, conv, t))?;
    apply_kernel(state, &cols, policy)
}

/// exp(i theta n_k); never leaves the space.
pub fn apply_phase_shift(state: &State, mode: usize, theta: f64) -> Result<State> {
    let space = state.space();
    if mode >= space.mode_count() {
        return invalid("phase shift mode out of range");
    }
    let ph: Vec<C64> = (0..space.dim())
        .map(|g| C64::from_polar(1.0, theta * space.occupation(g)[mode] as f64))
        .collect();
    Ok(match state {
        State::Pure(p) => {
            let amps = DVector::from_iterator(ph.len(), p.amplitudes().iter().zip(&ph).map(|(a, e)| a * e));
            State::Pure(PureState::from_parts(space.clone(), amps, p.norm_deficit()))
        }
        State::Mixed(r) => {
            let m = DMatrix::from_fn(ph.len(), ph.len(), |a, b| ph[a] * r.matrix()[(a, b)] * ph[b].conj());
            State::Mixed(DensityOperator::from_parts(space.clone(), m, r.trace_deficit()))
        }
    })
}

/// Sector transfer for two input sources feeding a network with `k` outputs.
///
/// For input (n_a, n_b) the column is the output amplitude vector of
/// (a^dag)^{n_a} (b^dag)^{n_b} / sqrt(n_a! n_b!) |0> over
/// `SectorBasis(k, n_a + n_b)`. The latest column for each n_a is cached, so
/// sweeping sectors upward costs one creation step per column.
pub struct PairTransfer {
    tables: ExpansionTables,
    row_a: Vec<C64>,
    row_b: Vec<C64>,
    cache: Vec<Option<(u32, Vec<C64>)>>,
}

impl PairTransfer {
    pub fn new(row_a: Vec<C64>, row_b: Vec<C64>) -> Result<Self> {
        if row_a.len() != row_b.len() {
            return invalid("source rows must have the same output count");
        }
        let k = row_a.len();
        Ok(Self { tables: ExpansionTables::new(k), row_a, row_b, cache: Vec::new() })
    }

    pub fn modes(&self) -> usize {
        self.tables.modes()
    }

    pub fn basis(&mut self, m: u32) -> &SectorBasis {
        self.tables.basis(m)
    }

    fn advance(&mut self, na: u32, nb: u32) {
        let slot = na as usize;
        if self.cache.len() <= slot {
            self.cache.resize(slot + 1, None);
        }
        let restart = !matches!(&self.cache[slot], Some((b, _)) if *b <= nb);
        if restart {
            let mut poly = vec![C64::new(1.0, 0.0)];
            for c in 1..=na {
                poly = self.tables.create(&poly, c - 1, &self.row_a, c as f64);
            }
            self.cache[slot] = Some((0, poly));
        }
        let (mut b, mut poly) = self.cache[slot].take().expect("filled above");
        while b < nb {
            poly = self.tables.create(&poly, na + b, &self.row_b, (b + 1) as f64);
            b += 1;
        }
        self.cache[slot] = Some((b, poly));
    }

    pub fn column(&mut self, na: u32, nb: u32) -> &[C64] {
        self.advance(na, nb);
        &self.cache[na as usize].as_ref().expect("advanced").1
    }

    /// Columns (n_a, m - n_a) for each listed n_a <= m.
    pub fn sector_columns(&mut self, m: u32, nas: &[u32]) -> Vec<&[C64]> {
        for &na in nas {
            self.advance(na, m - na);
        }
        nas.iter()
            .map(|&na| self.cache[na as usize].as_ref().expect("advanced").1.as_slice())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{coherent_state, fock_state};

    #[test]
    fn hong_ou_mandel() {
        let s: State = fock_state(&[2, 2], &[1, 1]).unwrap().into();
        let out = apply_beamsplitter(&s, 0, 1, BsConvention::Symmetric, TruncationPolicy::Strict).unwrap();
        let State::Pure(p) = out else { unreachable!() };
        assert!(p.amplitude(&[1, 1]).norm() < 1e-15);
        assert!((p.amplitude(&[2, 0]).norm_sqr() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn overflow_is_reported_or_tracked() {
        let s: State = fock_state(&[1, 1], &[1, 1]).unwrap().into();
        assert!(apply_beamsplitter(&s, 0, 1, BsConvention::Symmetric, TruncationPolicy::Strict).is_err());
        let t = apply_beamsplitter(&s, 0, 1, BsConvention::Symmetric, TruncationPolicy::TrackDeficit).unwrap();
        assert!((t.deficit() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_through_network() {
        let a = coherent_state(C64::new(0.6, 0.1), 25).unwrap();
        let vac = fock_state(&[25], &[0]).unwrap();
        let s: State = a.tensor(&vac).into();
        let out = apply_beamsplitter(&s, 0, 1, BsConvention::SignFlipFirst, TruncationPolicy::TrackDeficit).unwrap();
        let net = LinearNetwork::identity(2).beamsplitter(0, 1, BsConvention::SignFlipFirst);
        let g = net.propagate_coherent(&[C64::new(0.6, 0.1), C64::default()]);
        let x = crate::operator::quadrature_operator(0.0, 25);
        let m0 = crate::operator::expect_product(&out, &[(&[0], &x)]).unwrap();
        let m1 = crate::operator::expect_product(&out, &[(&[1], &x)]).unwrap();
        assert!((m0.re - g[0].re).abs() < 1e-10);
        assert!((m1.re - g[1].re).abs() < 1e-10);
    }

    #[test]
    fn pair_transfer_matches_expand() {
        let net = LinearNetwork::identity(3)
            .phase(1, 0.3)
            .beamsplitter(1, 2, BsConvention::SignFlipSecond)
            .beamsplitter(0, 1, BsConvention::SignFlipFirst);
        let mut pt = PairTransfer::new(net.row(0), net.row(1)).unwrap();
        let mut tables = ExpansionTables::new(3);
        for (na, nb) in [(0, 0), (2, 1), (1, 3), (0, 4), (3, 3), (2, 0), (2, 5)] {
            let (_, direct) = tables.expand(net.creation_map(), &[na, nb, 0]);
            let col = pt.column(na, nb).to_vec();
            let err: f64 = direct.iter().zip(&col).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-13);
            let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
