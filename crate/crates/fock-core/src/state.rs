//! Pure and mixed states on a [`ModeSpace`].

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::space::{ModeSpace, Occupation};
use crate::C64;

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct PureState {
    space: Arc<ModeSpace>,
    amps: DVector<C64>,
    norm_deficit: f64,
}

impl PureState {
    /// `norm_deficit` is the squared norm known to be missing from `amps`.
    pub fn new(space: Arc<ModeSpace>, amps: DVector<C64>, norm_deficit: f64) -> Result<Self> {
        if amps.len() != space.dim() {
            return invalid("amplitude vector does not match the space dimension");
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return invalid("non-finite amplitude");
        }
        let s = Self { space, amps, norm_deficit: norm_deficit.max(0.0) };
        if (s.norm_sqr() + s.norm_deficit - 1.0).abs() > NORM_TOL {
            return invalid(format!(
                "squared norm {} plus deficit {} is not 1",
                s.norm_sqr(),
                s.norm_deficit
            ));
        }
        Ok(s)
    }

    /// Rescale to unit norm; use when the vector is the whole state.
    pub fn normalized(space: Arc<ModeSpace>, amps: DVector<C64>) -> Result<Self> {
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Self::new(space, amps / C64::new(n, 0.0), 0.0)
    }

    pub(crate) fn from_parts(space: Arc<ModeSpace>, amps: DVector<C64>, norm_deficit: f64) -> Self {
        Self { space, amps, norm_deficit }
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn amplitude(&self, occ: &[u32]) -> C64 {
        self.space.index_of(occ).map(|i| self.amps[i]).unwrap_or_default()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let space = Arc::new(self.space.product(&other.space));
        let mut amps = DVector::zeros(space.dim());
        let nb = other.amps.len();
        for (i, a) in self.amps.iter().enumerate() {
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * nb + j] = a * b;
            }
        }
        let deficit = 1.0 - (1.0 - self.norm_deficit) * (1.0 - other.norm_deficit);
        PureState::from_parts(space, amps, deficit)
    }

    pub fn to_density(&self) -> DensityOperator {
        let m = &self.amps * self.amps.adjoint();
        DensityOperator::from_parts(self.space.clone(), m, self.norm_deficit)
    }
}

/// Vacuum on the given space.
pub fn vacuum(space: Arc<ModeSpace>) -> Result<PureState> {
    fock_in(space, &vec![0; 0])
}

fn fock_in(space: Arc<ModeSpace>, occ: &[u32]) -> Result<PureState> {
    let occ: Occupation = if occ.is_empty() { vec![0; space.mode_count()] } else { occ.to_vec() };
    let Some(i) = space.index_of(&occ) else {
        return invalid(format!("occupation {occ:?} is not in the space"));
    };
    let mut amps = DVector::zeros(space.dim());
    amps[i] = C64::new(1.0, 0.0);
    Ok(PureState::from_parts(space, amps, 0.0))
}

/// Number state |occ> on the box with the given cutoffs.
pub fn fock_state(cutoffs: &[u32], occ: &[u32]) -> Result<PureState> {
    if cutoffs.len() != occ.len() {
        return invalid("occupation length differs from the mode count");
    }
    fock_in(ModeSpace::boxed(cutoffs)?.shared(), occ)
}

pub fn coherent_state(alpha: C64, cutoff: u32) -> Result<PureState> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return invalid("non-finite coherent amplitude");
    }
    let space = ModeSpace::single(cutoff).shared();
    let mu = alpha.norm_sqr();
    let mut amps = DVector::zeros(cutoff as usize + 1);
    for n in 0..=cutoff {
        amps[n as usize] = coherent_amplitude(alpha, n);
    }
    // Tail from the complement so the deficit stays accurate when it is tiny.
    let tail = poisson_tail(mu, cutoff);
    Ok(PureState::from_parts(space, amps, tail))
}

/// Coherent state with the default cutoff ceil(|a|^2 + 10 sqrt(|a|^2+1)).
pub fn coherent_state_default(alpha: C64) -> Result<PureState> {
    coherent_state(alpha, crate::special::default_cutoff(alpha.norm_sqr()))
}

pub fn coherent_amplitude(alpha: C64, n: u32) -> C64 {
    let mu = alpha.norm_sqr();
    if mu == 0.0 {
        return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    let ln_mag = 0.5 * crate::special::poisson_ln_pmf(n as u64, mu);
    C64::from_polar(ln_mag.exp(), n as f64 * alpha.arg())
}

/// P(N > cutoff) for N ~ Poisson(mu), summed upward from the cutoff.
pub fn poisson_tail(mu: f64, cutoff: u32) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut k = cutoff as u64 + 1;
    loop {
        let p = crate::special::poisson_pmf(k, mu);
        acc += p;
        if (k as f64 > mu && p < acc * 1e-17) || p == 0.0 && k as f64 > mu {
            break;
        }
        k += 1;
    }
    acc
}

/// Two-mode squeezed vacuum sum_n tanh^n r / cosh r |n,n>, n <= cutoff.
/// The space holds only the diagonal tuples.
pub fn tmsv_state(r: f64, cutoff: u32) -> Result<PureState> {
    if !(r >= 0.0) || !r.is_finite() {
        return invalid("squeezing must be finite and non-negative");
    }
    let basis: Vec<Occupation> = (0..=cutoff).map(|n| vec![n, n]).collect();
    let space = ModeSpace::from_basis(&[cutoff, cutoff], None, basis)?.shared();
    let t = r.tanh();
    let c = r.cosh();
    let amps = DVector::from_iterator(
        cutoff as usize + 1,
        (0..=cutoff).map(|n| C64::new(t.powi(n as i32) / c, 0.0)),
    );
    let deficit = (t * t).powi(cutoff as i32 + 1);
    Ok(PureState::from_parts(space, amps, deficit))
}

#[derive(Clone, Debug)]
pub struct DensityOperator {
    space: Arc<ModeSpace>,
    matrix: DMatrix<C64>,
    trace_deficit: f64,
}

impl DensityOperator {
    pub fn new(space: Arc<ModeSpace>, matrix: DMatrix<C64>, trace_deficit: f64) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return invalid("density matrix does not match the space dimension");
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > 1e-12 {
            return invalid(format!("matrix is not Hermitian (defect {herm:.2e})"));
        }
        let s = Self { space, matrix, trace_deficit: trace_deficit.max(0.0) };
        if (s.trace() + s.trace_deficit - 1.0).abs() > NORM_TOL {
            return invalid("trace plus deficit is not 1");
        }
        if s.min_eigenvalue() < -1e-10 {
            return invalid("matrix is not positive semidefinite");
        }
        Ok(s)
    }

    pub(crate) fn from_parts(space: Arc<ModeSpace>, matrix: DMatrix<C64>, trace_deficit: f64) -> Self {
        Self { space, matrix, trace_deficit }
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix).into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let space = Arc::new(self.space.product(&other.space));
        let m = self.matrix.kronecker(&other.matrix);
        let deficit = 1.0 - (1.0 - self.trace_deficit) * (1.0 - other.trace_deficit);
        DensityOperator::from_parts(space, m, deficit)
    }

    /// Reduced state on `keep` (mode order as given).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let red = self.space.marginal(keep)?;
        let rest: Vec<usize> = (0..self.space.mode_count()).filter(|m| !keep.contains(m)).collect();
        let mut out = DMatrix::zeros(red.dim(), red.dim());
        let groups = group_by_rest(&self.space, &rest);
        let sub: Vec<usize> = (0..self.space.dim())
            .map(|g| {
                let t: Vec<u32> = keep.iter().map(|&m| self.space.occupation(g)[m]).collect();
                red.index_of(&t).expect("marginal contains every sub-tuple")
            })
            .collect();
        for members in groups {
            for &g in &members {
                for &h in &members {
                    out[(sub[g], sub[h])] += self.matrix[(g, h)];
                }
            }
        }
        Ok(DensityOperator::from_parts(red.shared(), out, self.trace_deficit))
    }

    /// Sum of |negative eigenvalues| of the partial transpose on `modes_b`.
    pub fn negativity(&self, modes_b: &[usize]) -> Result<f64> {
        let modes_a: Vec<usize> = (0..self.space.mode_count()).filter(|m| !modes_b.contains(m)).collect();
        let sa = self.space.marginal(&modes_a)?;
        let sb = self.space.marginal(modes_b)?;
        let (da, db) = (sa.dim(), sb.dim());
        let split: Vec<(usize, usize)> = (0..self.space.dim())
            .map(|g| {
                let occ = self.space.occupation(g);
                let a: Vec<u32> = modes_a.iter().map(|&m| occ[m]).collect();
                let b: Vec<u32> = modes_b.iter().map(|&m| occ[m]).collect();
                (sa.index_of(&a).unwrap(), sb.index_of(&b).unwrap())
            })
            .collect();
        let mut pt = DMatrix::<C64>::zeros(da * db, da * db);
        for g in 0..self.space.dim() {
            for h in 0..self.space.dim() {
                let z = self.matrix[(g, h)];
                if z == C64::default() {
                    continue;
                }
                let (a, b) = split[g];
                let (a2, b2) = split[h];
                pt[(a * db + b2, a2 * db + b)] += z;
            }
        }
        Ok(hermitian_eigenvalues(&pt).into_iter().filter(|&l| l < 0.0).map(|l| -l).sum())
    }
}

pub(crate) fn group_by_rest(space: &ModeSpace, rest: &[usize]) -> Vec<Vec<usize>> {
    let mut map: std::collections::HashMap<Vec<u32>, Vec<usize>> = Default::default();
    for g in 0..space.dim() {
        let key: Vec<u32> = rest.iter().map(|&m| space.occupation(g)[m]).collect();
        map.entry(key).or_default().push(g);
    }
    let mut groups: Vec<_> = map.into_values().collect();
    groups.sort();
    groups
}

pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// Either representation; most consumers accept both.
#[derive(Clone, Debug)]
pub enum State {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl State {
    pub fn space(&self) -> &Arc<ModeSpace> {
        match self {
            State::Pure(p) => p.space(),
            State::Mixed(d) => d.space(),
        }
    }

    pub fn deficit(&self) -> f64 {
        match self {
            State::Pure(p) => p.norm_deficit(),
            State::Mixed(d) => d.trace_deficit(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(d) => d.clone(),
        }
    }

    pub fn tensor(&self, other: &State) -> State {
        match (self, other) {
            (State::Pure(a), State::Pure(b)) => State::Pure(a.tensor(b)),
            (a, b) => State::Mixed(a.to_density().tensor(&b.to_density())),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.to_density_ref(|d| d.partial_trace(keep))
    }

    fn to_density_ref<T>(&self, f: impl FnOnce(&DensityOperator) -> T) -> T {
        match self {
            State::Pure(p) => f(&p.to_density()),
            State::Mixed(d) => f(d),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityOperator> for State {
    fn from(d: DensityOperator) -> Self {
        State::Mixed(d)
    }
}
