//! Signal-mode POVM of a circuit whose LO is a pure coherent state.
//!
//! With the LO displaced into the outputs (gamma_k = V[r][k] beta) the
//! amplitude of counts c for signal |n> is
//! A_n(c) = sum_{|j| = n} sqrt(n!/prod j_k!) prod w_k^{j_k} <c_k|D(gamma_k)|j_k>,
//! w the signal row. It is built one counter at a time. The counter that
//! sees only LO light factorizes into a Poisson weight.

use nalgebra::DMatrix;

use fock_core::special::{binomial, displaced_fock_overlap, poisson_pmf, poisson_window};
use fock_core::{Exec, ModeSpace, Operator, State, C64};

use crate::circuits::Detector;
use crate::dist::OutcomeDistribution;
use crate::exact::PRUNE;
use crate::DetectionError;

/// Completeness deficits above this mean the overlaps are not trustworthy.
pub const COMPLETENESS_LIMIT: f64 = 1e-6;
const MAX_TABLE: usize = 60_000_000;
const WIDEN_ATTEMPTS: usize = 4;

#[derive(Clone, Debug)]
pub struct CoherentLoPovm {
    det: Detector,
    signal_cutoff: u32,
    active: Vec<usize>,
    /// Flat active-counter tuples.
    tuples: Vec<u32>,
    /// amps[t * (cs + 1) + n] = A_n(tuple t)
    amps: Vec<C64>,
    n0_lo: u32,
    n0_weights: Vec<f64>,
    completeness_deficit: f64,
}

/// Count window for a counter with LO mean `mu` that may also receive up to
/// `extra` signal photons.
pub fn count_window(mu: f64, extra: u32) -> (u32, u32) {
    let (lo, hi) = poisson_window(mu);
    (lo.saturating_sub(extra), hi + extra)
}

/// Compile the POVM, widening the count windows of the signal-fed counters
/// until the completeness deficit is below [`COMPLETENESS_LIMIT`].
pub fn povm_compile_coherent_lo(
    beta: C64,
    det: Detector,
    signal_cutoff: u32,
    count_limits: Option<&[u32]>,
) -> Result<CoherentLoPovm, DetectionError> {
    let mut extra = signal_cutoff;
    let mut last = 0.0;
    for _ in 0..WIDEN_ATTEMPTS {
        let povm = compile(beta, det, signal_cutoff, count_limits, extra)?;
        if povm.completeness_deficit <= COMPLETENESS_LIMIT {
            return Ok(povm);
        }
        last = povm.completeness_deficit;
        extra = 2 * extra + 10;
    }
    Err(DetectionError::BackendFailure(format!(
        "coherent-LO POVM completeness deficit {last:.3e} exceeds {COMPLETENESS_LIMIT:e}"
    )))
}

fn compile(
    beta: C64,
    det: Detector,
    signal_cutoff: u32,
    count_limits: Option<&[u32]>,
    extra: u32,
) -> Result<CoherentLoPovm, DetectionError> {
    let net = det.network();
    let k = det.counters();
    let w = net.row(0);
    let mut lo_in = vec![C64::default(); net.modes()];
    lo_in[1] = beta;
    let gamma = net.propagate_coherent(&lo_in);
    let inactive = det.lo_only_counter();
    if w[inactive] != C64::default() {
        return Err(DetectionError::InvalidInput("LO-only counter receives signal light".into()));
    }
    let active: Vec<usize> = (0..k).filter(|&c| c != inactive).collect();
    let cs = signal_cutoff;
    let nd = cs as usize + 1;
    let limit = |c: usize, hi: u32| count_limits.map_or(hi, |l| hi.min(l[c]));

    let windows: Vec<(u32, u32)> = active
        .iter()
        .map(|&c| {
            let (lo, hi) = count_window(gamma[c].norm_sqr(), extra);
            (lo, limit(c, hi))
        })
        .collect();
    let size: usize = windows.iter().map(|(lo, hi)| (hi - lo + 1) as usize).product();
    if size.saturating_mul(nd) > MAX_TABLE {
        return Err(DetectionError::OutOfRange(format!(
            "coherent-LO table of {size} count tuples is beyond the supported size"
        )));
    }

    // sqrt(C(j, t)) table
    let sqrt_binom: Vec<Vec<f64>> = (0..nd).map(|j| (0..=j).map(|t| binomial(j as u64, t as u64).sqrt()).collect()).collect();

    let mut tuples: Vec<u32> = Vec::new();
    let mut g: Vec<C64> = vec![C64::default(); nd];
    g[0] = C64::new(1.0, 0.0);
    let mut width = 0usize;
    for (ai, &c) in active.iter().enumerate() {
        let (lo, hi) = windows[ai];
        let wpow: Vec<C64> = (0..nd).map(|t| w[c].powu(t as u32)).collect();
        let mut disp = Vec::with_capacity((hi - lo + 1) as usize * nd);
        for cnt in lo..=hi {
            for t in 0..nd {
                disp.push(displaced_fock_overlap(cnt, gamma[c], t as u32)? * wpow[t]);
            }
        }
        let n_prev = g.len() / nd;
        let n_win = (hi - lo + 1) as usize;
        let mut g2 = vec![C64::default(); n_prev * n_win * nd];
        let mut t2 = Vec::with_capacity(n_prev * n_win * (width + 1));
        for p in 0..n_prev {
            let gp = &g[p * nd..(p + 1) * nd];
            for (wi, cnt) in (lo..=hi).enumerate() {
                let dv = &disp[wi * nd..(wi + 1) * nd];
                let out = &mut g2[(p * n_win + wi) * nd..(p * n_win + wi + 1) * nd];
                for j in 0..nd {
                    let mut acc = C64::default();
                    for t in 0..=j {
                        if gp[j - t] != C64::default() {
                            acc += gp[j - t] * dv[t] * sqrt_binom[j][t];
                        }
                    }
                    out[j] = acc;
                }
                t2.extend_from_slice(&tuples[p * width..(p + 1) * width]);
                t2.push(cnt);
            }
        }
        g = g2;
        tuples = t2;
        width += 1;
    }

    let mu0 = gamma[inactive].norm_sqr();
    let (n0_lo, n0_hi) = poisson_window(mu0);
    let n0_hi = limit(inactive, n0_hi);
    let n0_weights: Vec<f64> = (n0_lo..=n0_hi).map(|n| poisson_pmf(n as u64, mu0)).collect();
    let n0_mass: f64 = n0_weights.iter().sum();

    let n_t = tuples.len() / width;
    let mut worst: f64 = 1.0 - n0_mass;
    for n in 0..nd {
        let s: f64 = (0..n_t).map(|t| g[t * nd + n].norm_sqr()).sum();
        worst = worst.max(1.0 - s * n0_mass);
    }
    Ok(CoherentLoPovm {
        det,
        signal_cutoff: cs,
        active,
        tuples,
        amps: g,
        n0_lo,
        n0_weights,
        completeness_deficit: worst.max(0.0),
    })
}

impl CoherentLoPovm {
    pub fn detector(&self) -> Detector {
        self.det
    }

    pub fn signal_cutoff(&self) -> u32 {
        self.signal_cutoff
    }

    pub fn completeness_deficit(&self) -> f64 {
        self.completeness_deficit
    }

    fn nd(&self) -> usize {
        self.signal_cutoff as usize + 1
    }

    fn n_tuples(&self) -> usize {
        self.tuples.len() / self.active.len()
    }

    fn full_counts(&self, t: usize, n0: u32, out: &mut [u32]) {
        out[self.det.lo_only_counter()] = n0;
        let w = self.active.len();
        for (i, &c) in self.active.iter().enumerate() {
            out[c] = self.tuples[t * w + i];
        }
    }

    /// Pi_c with Pi[n', n] = conj(A_n'(c)) A_n(c) (times the LO-only weight).
    pub fn element(&self, counts: &[u32]) -> DMatrix<C64> {
        let nd = self.nd();
        let mut m = DMatrix::zeros(nd, nd);
        let inactive = self.det.lo_only_counter();
        let n0 = counts[inactive];
        if n0 < self.n0_lo || (n0 - self.n0_lo) as usize >= self.n0_weights.len() {
            return m;
        }
        let p0 = self.n0_weights[(n0 - self.n0_lo) as usize];
        let w = self.active.len();
        let key: Vec<u32> = self.active.iter().map(|&c| counts[c]).collect();
        if let Some(t) = (0..self.n_tuples()).find(|&t| self.tuples[t * w..(t + 1) * w] == key[..]) {
            let a = &self.amps[t * nd..(t + 1) * nd];
            for i in 0..nd {
                for j in 0..nd {
                    m[(i, j)] = a[i].conj() * a[j] * p0;
                }
            }
        }
        m
    }

    pub fn completeness_matrix(&self) -> DMatrix<C64> {
        let one = |_: &[u32]| 1.0;
        self.effective_matrices(&[&one], Exec::Sequential).remove(0)
    }

    fn effective_matrices(&self, hs: &[&(dyn Fn(&[u32]) -> f64 + Sync)], exec: Exec) -> Vec<DMatrix<C64>> {
        let nd = self.nd();
        let k = self.det.counters();
        let zero = vec![DMatrix::<C64>::zeros(nd, nd); hs.len()];
        exec.map_reduce(
            0..self.n_tuples(),
            zero.clone(),
            |t| {
                let mut counts = vec![0u32; k];
                let mut hbar = vec![0.0; hs.len()];
                for (i, p0) in self.n0_weights.iter().enumerate() {
                    self.full_counts(t, self.n0_lo + i as u32, &mut counts);
                    for (hb, h) in hbar.iter_mut().zip(hs) {
                        *hb += p0 * h(&counts);
                    }
                }
                let a = &self.amps[t * nd..(t + 1) * nd];
                let mut out = zero.clone();
                for (o, hb) in out.iter_mut().zip(&hbar) {
                    for i in 0..nd {
                        for j in 0..nd {
                            o[(i, j)] = a[i].conj() * a[j] * *hb;
                        }
                    }
                }
                out
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
    }

    /// O_h = sum_c h(c) Pi_c on the signal mode, one per function.
    pub fn effective_operators(&self, hs: &[&(dyn Fn(&[u32]) -> f64 + Sync)], exec: Exec) -> Vec<Operator> {
        let space = ModeSpace::single(self.signal_cutoff).shared();
        self.effective_matrices(hs, exec)
            .into_iter()
            .map(|m| Operator::new(space.clone(), m).expect("signal-sized matrix"))
            .collect()
    }

    /// Outcome distribution for a one-mode signal state on this cutoff.
    pub fn distribution(&self, signal: &State) -> Result<OutcomeDistribution, DetectionError> {
        let sp = signal.space();
        if sp.mode_count() != 1 || sp.cutoffs()[0] > self.signal_cutoff {
            return Err(DetectionError::InvalidInput("signal does not fit the compiled POVM".into()));
        }
        let nd = self.nd();
        let rho = signal.to_density();
        let mut full = DMatrix::<C64>::zeros(nd, nd);
        for a in 0..sp.dim() {
            for b in 0..sp.dim() {
                full[(sp.occupation(a)[0] as usize, sp.occupation(b)[0] as usize)] = rho.matrix()[(a, b)];
            }
        }
        let k = self.det.counters();
        let mut counts = Vec::new();
        let mut probs = Vec::new();
        let mut pruned = 0.0;
        let mut c = vec![0u32; k];
        for t in 0..self.n_tuples() {
            let a = &self.amps[t * nd..(t + 1) * nd];
            let mut pa = C64::default();
            for i in 0..nd {
                if a[i] == C64::default() {
                    continue;
                }
                for j in 0..nd {
                    pa += full[(i, j)] * a[i] * a[j].conj();
                }
            }
            for (i, p0) in self.n0_weights.iter().enumerate() {
                let p = pa.re * p0;
                if p < PRUNE {
                    pruned += p.max(0.0);
                    continue;
                }
                self.full_counts(t, self.n0_lo + i as u32, &mut c);
                counts.extend_from_slice(&c);
                probs.push(p);
            }
        }
        let mass: f64 = probs.iter().sum();
        let deficit = (1.0 - signal.deficit() - mass).max(0.0).max(pruned) + signal.deficit();
        OutcomeDistribution::new(self.det, counts, probs, deficit)
    }
}
