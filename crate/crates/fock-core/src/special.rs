//! Scalar special functions used across the workspace.

use crate::error::{FockError, Result};
use crate::C64;

const SMALL_FACT: [f64; 21] = {
    let mut t = [1.0f64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};

/// ln(n!) exact for small n, Stirling series beyond (relative error < 1e-16).
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 20 {
        return SMALL_FACT[n as usize].ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

pub fn factorial(n: u64) -> f64 {
    if n <= 20 {
        SMALL_FACT[n as usize]
    } else {
        ln_factorial(n).exp()
    }
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 60 {
        // exact in f64 for this range
        let k = k.min(n - k);
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        return acc.round();
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

pub fn poisson_ln_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    k as f64 * mean.ln() - mean - ln_factorial(k)
}

pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    poisson_ln_pmf(k, mean).exp()
}

/// Default truncation for a Poisson-like photon number with mean `mean`:
/// ceil(mean + 10 sqrt(mean + 1)).
pub fn default_cutoff(mean: f64) -> u32 {
    (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as u32
}

/// Summation window [lo, hi] covering the Poisson bulk of `mean`.
pub fn poisson_window(mean: f64) -> (u32, u32) {
    let half = 10.0 * (mean + 1.0).sqrt();
    let lo = (mean - half).floor().max(0.0) as u32;
    (lo, default_cutoff(mean))
}

/// Associated Laguerre polynomial L_n^{(a)}(x) by the three-term recurrence.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut l0 = 1.0;
    let mut l1 = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 + a - x) * l1 - (k + a) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// <m| D(gamma) |k> with D(gamma) = exp(gamma a^dag - gamma^* a).
pub fn displaced_fock_overlap(m: u32, gamma: C64, k: u32) -> Result<C64> {
    if !gamma.re.is_finite() || !gamma.im.is_finite() {
        return Err(FockError::InvalidInput("non-finite displacement".into()));
    }
    let x = gamma.norm_sqr();
    if x > 1e6 {
        return Err(FockError::OutOfRange(format!(
            "|gamma|^2 = {x:.3e} exceeds the stable range"
        )));
    }
    if x == 0.0 {
        return Ok(if m == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    }
    let (hi, lo, base) = if m >= k { (m, k, gamma) } else { (k, m, -gamma.conj()) };
    let d = hi - lo;
    let ln_pref = 0.5 * (ln_factorial(lo as u64) - ln_factorial(hi as u64))
        + d as f64 * base.norm().ln()
        - 0.5 * x;
    let lag = laguerre(lo, d as f64, x);
    let phase = C64::from_polar(1.0, d as f64 * base.arg());
    Ok(phase * (ln_pref.exp() * lag))
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompSum {
    sum: f64,
    comp: f64,
}

impl CompSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_matches_table_at_the_seam() {
        let direct: f64 = (1..=25u64).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(25) - direct).abs() < 1e-12);
        assert!((ln_factorial(21) - (SMALL_FACT[20] * 21.0).ln()).abs() < 1e-13);
    }

    #[test]
    fn laguerre_low_orders() {
        let (a, x) = (2.5, 0.7);
        assert!((laguerre(2, a, x) - (x * x / 2.0 - (a + 2.0) * x + (a + 2.0) * (a + 1.0) / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn overlap_vacuum_cases() {
        let g = C64::new(0.3, -0.4);
        let v = displaced_fock_overlap(0, g, 0).unwrap();
        assert!((v.re - (-0.125f64).exp()).abs() < 1e-15 && v.im.abs() < 1e-15);
        let v = displaced_fock_overlap(0, g, 2).unwrap();
        let want = (-g.conj()).powu(2) * (-0.125f64).exp() / 2f64.sqrt();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(s.value(), 1.0);
    }
}
