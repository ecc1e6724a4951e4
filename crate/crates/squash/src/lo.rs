//! Squashing against a pure coherent LO without building the pair state.
//!
//! For rho_s (x) |beta><beta| the squashed state is
//! Lambda[n, n'] = rho_s[n, n'] S(n' - n) with S(d) = sum_k b_k conj(b_{k-d}),
//! b_k the coherent amplitudes. S only needs the Poisson bulk, so this works
//! at LO intensities where the Fock pair space is out of reach.

use nalgebra::DMatrix;

use fock_core::error::Result;
use fock_core::special::{ln_factorial, CompSum};
use fock_core::{DensityOperator, Operator, C64};

use crate::bad;

/// S(0), ..., S(max_delta); S(-d) = conj(S(d)).
pub fn lo_overlap_sums(beta: C64, max_delta: u32) -> Vec<C64> {
    let mu = beta.norm_sqr();
    if mu == 0.0 {
        return (0..=max_delta).map(|d| C64::new(if d == 0 { 1.0 } else { 0.0 }, 0.0)).collect();
    }
    let ln_b = beta.norm().ln();
    let width = 12.0 * (mu + 1.0).sqrt();
    let lo = (mu - width).floor().max(0.0) as u64;
    (0..=max_delta as u64)
        .map(|d| {
            let hi = (mu + width).ceil() as u64 + d;
            let mag: CompSum = (lo.max(d)..=hi)
                .map(|k| {
                    let ln = -mu + (2 * k - d) as f64 * ln_b - 0.5 * (ln_factorial(k) + ln_factorial(k - d));
                    ln.exp()
                })
                .collect();
            C64::from_polar(mag.value(), d as f64 * beta.arg())
        })
        .collect()
}

fn s_at(s: &[C64], delta: i64) -> C64 {
    if delta >= 0 {
        s[delta as usize]
    } else {
        s[(-delta) as usize].conj()
    }
}

/// Lambda(rho_s (x) |beta><beta|) for a one-mode signal.
pub fn squash_with_coherent_lo(signal: &DensityOperator, beta: C64) -> Result<DensityOperator> {
    if signal.space().mode_count() != 1 {
        return Err(bad("signal must be a one-mode state"));
    }
    let d = signal.space().dim();
    let s = lo_overlap_sums(beta, d.saturating_sub(1) as u32);
    let r = signal.matrix();
    let m = DMatrix::from_fn(d, d, |i, j| r[(i, j)] * s_at(&s, j as i64 - i as i64));
    // The LO tail beyond the bulk is below 1e-30 and is not tracked.
    DensityOperator::new(signal.space().clone(), m, signal.trace_deficit())
}

/// X~ with Tr[X Lambda(rho_s (x) beta)] = Tr[X~ rho_s], for X on v and rho_s
/// on a signal mode with the same cutoff.
pub fn lo_dressed_operator(x: &Operator, beta: C64) -> Result<Operator> {
    if x.space().mode_count() != 1 {
        return Err(bad("operator must act on one mode"));
    }
    let d = x.space().dim();
    let s = lo_overlap_sums(beta, d.saturating_sub(1) as u32);
    let xm = x.matrix();
    let m = DMatrix::from_fn(d, d, |i, j| xm[(i, j)] * s_at(&s, i as i64 - j as i64));
    Operator::new(x.space().clone(), m)
}
