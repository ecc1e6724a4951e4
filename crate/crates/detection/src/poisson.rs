//! Coherent signal with coherent LO: the counters are independent Poisson
//! variables with means |gamma_k|^2, so expectations are nested sums over
//! the Poisson bulk of each counter and nothing is materialized.

use fock_core::special::{poisson_pmf, poisson_window};
use fock_core::{Exec, C64};

use crate::circuits::Detector;
use crate::dist::OutcomeDistribution;
use crate::exact::PRUNE;
use crate::DetectionError;

#[derive(Clone, Debug)]
pub struct PoissonProduct {
    det: Detector,
    means: Vec<f64>,
    windows: Vec<(u32, u32)>,
    pmfs: Vec<Vec<f64>>,
}

/// Per-setting homodyne sums from one pass. `f_over_n1` is f_hom/(N+1)
/// before the 1/4 of the four-setting average.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HomSums {
    pub z: f64,
    pub z2: f64,
    pub f_over_n1: f64,
    pub g: f64,
    pub mass: f64,
}

impl PoissonProduct {
    pub fn new(alpha: C64, beta: C64, det: Detector) -> Result<Self, DetectionError> {
        if !(alpha.norm().is_finite() && beta.norm().is_finite()) {
            return Err(DetectionError::InvalidInput("non-finite coherent amplitude".into()));
        }
        let net = det.network();
        let mut input = vec![C64::default(); net.modes()];
        input[0] = alpha;
        input[1] = beta;
        let means: Vec<f64> = net.propagate_coherent(&input).iter().map(|g| g.norm_sqr()).collect();
        let windows: Vec<(u32, u32)> = means.iter().map(|&m| poisson_window(m)).collect();
        let pmfs = means
            .iter()
            .zip(&windows)
            .map(|(&m, &(lo, hi))| (lo..=hi).map(|n| poisson_pmf(n as u64, m)).collect())
            .collect();
        Ok(Self { det, means, windows, pmfs })
    }

    pub fn detector(&self) -> Detector {
        self.det
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Number of count tuples the nested sums visit.
    pub fn support_size(&self) -> usize {
        self.pmfs.iter().map(|p| p.len()).product()
    }

    /// Expectations of each function plus the captured mass.
    pub fn expectations(&self, hs: &[&(dyn Fn(&[u32]) -> f64 + Sync)], exec: Exec) -> (Vec<f64>, f64) {
        let k = self.pmfs.len();
        let n_first = self.pmfs[0].len();
        let zero = vec![0.0; hs.len() + 1];
        let acc = exec.map_reduce(
            0..n_first,
            zero.clone(),
            |i0| {
                let mut acc = zero.clone();
                let mut idx = vec![0usize; k];
                idx[0] = i0;
                let mut c = vec![0u32; k];
                loop {
                    let mut p = 1.0;
                    for j in 0..k {
                        p *= self.pmfs[j][idx[j]];
                        c[j] = self.windows[j].0 + idx[j] as u32;
                    }
                    for (a, h) in acc.iter_mut().zip(hs) {
                        *a += p * h(&c);
                    }
                    acc[hs.len()] += p;
                    // odometer over counters 1..k
                    let mut j = k - 1;
                    loop {
                        if j == 0 {
                            return acc;
                        }
                        idx[j] += 1;
                        if idx[j] < self.pmfs[j].len() {
                            break;
                        }
                        idx[j] = 0;
                        j -= 1;
                    }
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
        let mass = acc[hs.len()];
        (acc[..hs.len()].to_vec(), mass)
    }

    /// Closed-form inner loop for the homodyne statistics.
    pub fn hom_sums(&self, exec: Exec) -> Result<HomSums, DetectionError> {
        if !matches!(self.det, Detector::Hom(_)) {
            return Err(DetectionError::InvalidInput("homodyne sums need the homodyne circuit".into()));
        }
        let (w0, w1, w2) = (self.windows[0], self.windows[1], self.windows[2]);
        let (p0, p1, p2) = (&self.pmfs[0], &self.pmfs[1], &self.pmfs[2]);
        let r = exec.map_reduce(
            0..p0.len(),
            HomSums::default(),
            |i0| {
                let n0 = w0.0 + i0 as u32;
                let q0 = p0[i0];
                let quart = 1.0 / (6.0 * (n0 as f64 + 1.0) * (n0 as f64 + 2.0));
                let half_g = 1.0 / (2.0 * (n0 as f64 + 1.0));
                let mut s = HomSums::default();
                for (i1, &q1) in p1.iter().enumerate() {
                    let n1 = w1.0 + i1 as u32;
                    let q01 = q0 * q1;
                    for (i2, &q2) in p2.iter().enumerate() {
                        let n2 = w2.0 + i2 as u32;
                        let p = q01 * q2;
                        let tot = (n0 + n1 + n2 + 1) as f64;
                        let d = n1 as f64 - n2 as f64;
                        let d2 = d * d;
                        let mut f = d2 * d2 * quart;
                        let mut g = d2 * half_g;
                        if n0 == 0 {
                            let sum = (n1 + n2) as f64;
                            f += 0.75 * sum * sum + 7.0 / 6.0 * sum + 0.5;
                            g += 0.5 * (sum + 1.0);
                        }
                        s.z += p * d / (2.0 * tot).sqrt();
                        s.z2 += p * d2 / (2.0 * tot);
                        s.f_over_n1 += p * f / tot;
                        s.g += p * g;
                        s.mass += p;
                    }
                }
                s
            },
            |a, b| HomSums {
                z: a.z + b.z,
                z2: a.z2 + b.z2,
                f_over_n1: a.f_over_n1 + b.f_over_n1,
                g: a.g + b.g,
                mass: a.mass + b.mass,
            },
        );
        Ok(r)
    }

    /// Materialized distribution; only sensible for small means.
    pub fn distribution(&self) -> Result<OutcomeDistribution, DetectionError> {
        let size = self.support_size();
        if size > 20_000_000 {
            return Err(DetectionError::OutOfRange(format!("{size} outcomes is too many to materialize")));
        }
        let k = self.pmfs.len();
        let mut counts = Vec::new();
        let mut probs = Vec::new();
        let mut idx = vec![0usize; k];
        let mut pruned = 0.0;
        'outer: loop {
            let mut p = 1.0;
            for j in 0..k {
                p *= self.pmfs[j][idx[j]];
            }
            if p >= PRUNE {
                for j in 0..k {
                    counts.push(self.windows[j].0 + idx[j] as u32);
                }
                probs.push(p);
            } else {
                pruned += p;
            }
            let mut j = k;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < self.pmfs[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
        let mass: f64 = probs.iter().sum();
        OutcomeDistribution::new(self.det, counts, probs, (1.0 - mass).max(pruned))
    }
}
