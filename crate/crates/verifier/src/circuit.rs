//! The two detector circuits rebuilt from their output-mode relations, and
//! the single-mode and adjoint-map constructions the identities compare
//! against.
//!
//! The relations give output annihilators in terms of inputs,
//! a_out = A a_in. Inverting a unitary A gives a_in^dag = sum_k A[k][in]
//! a_k^dag, so the creation row of an input is the matching column of A.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use nalgebra::DMatrix;

use fock_core::optics::ExpansionTables;
use fock_core::special::factorial;
use fock_core::{Exec, ModeSpace, C64};

use crate::{invalid, Result};

/// A count function on detector outcomes, counters in detector order.
pub type CountFn<'a> = &'a (dyn Fn(&[u32]) -> f64 + Sync);

#[derive(Clone, Debug, PartialEq)]
pub struct PairCircuit {
    /// Row 0: signal creation operator; row 1: LO creation operator, both
    /// over the counters. Ancilla inputs are in vacuum and drop out.
    rows: DMatrix<C64>,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl PairCircuit {
    /// Counters (0, 1, 2), inputs (s, r, a), with
    ///   a_1 = a_s/sqrt2 + a_r/2 - a_a/2,
    ///   a_2 = -a_s/sqrt2 + a_r/2 - a_a/2,
    ///   a_0 = sqrt2 a_r - a_r' = (a_r + a_a)/sqrt2.
    pub fn homodyne() -> Self {
        let h = FRAC_1_SQRT_2;
        let a = [
            [c(0.0, 0.0), c(h, 0.0), c(h, 0.0)],
            [c(h, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
            [c(-h, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
        ];
        Self::from_relations(&a.map(|r| r.to_vec()))
    }

    /// Counters (0', 1', 2', 3', 4'), inputs (s, r, a', b', c'), with
    /// a_r' = (a_r - a_a')/sqrt2 substituted into
    ///   a_1' = (a_s + a_r' + a_b' + a_c')/2,
    ///   a_2' = (-a_s + a_r' + a_b' - a_c')/2,
    ///   a_3' = (a_s + i a_r' - i a_b' - a_c')/2,
    ///   a_4' = (-a_s + i a_r' - i a_b' + a_c')/2,
    /// and a_0' = (a_r + a_a')/sqrt2.
    pub fn heterodyne() -> Self {
        let h = FRAC_1_SQRT_2;
        let q = 0.5 * h;
        let a = [
            [c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.5, 0.0), c(q, 0.0), c(-q, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
            [c(-0.5, 0.0), c(q, 0.0), c(-q, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
            [c(0.5, 0.0), c(0.0, q), c(0.0, -q), c(0.0, -0.5), c(-0.5, 0.0)],
            [c(-0.5, 0.0), c(0.0, q), c(0.0, -q), c(0.0, -0.5), c(0.5, 0.0)],
        ];
        Self::from_relations(&a.map(|r| r.to_vec()))
    }

    /// `a[k][j]`: coefficient of input j in output k. Inputs 0 and 1 are the
    /// signal and the LO.
    pub fn from_relations(a: &[Vec<C64>]) -> Self {
        let k = a.len();
        Self { rows: DMatrix::from_fn(2, k, |inp, out| a[out][inp]) }
    }

    pub fn counters(&self) -> usize {
        self.rows.ncols()
    }

    pub fn rows(&self) -> &DMatrix<C64> {
        &self.rows
    }

    /// max |A A^dag - 1| restricted to the two used inputs.
    pub fn isometry_defect(&self) -> f64 {
        let g = &self.rows * self.rows.adjoint();
        (g - DMatrix::<C64>::identity(2, 2)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Output amplitudes of |n, m> in the degree n+m sector.
    fn expand(&self, tables: &mut ExpansionTables, n: u32, m: u32) -> Vec<C64> {
        tables.expand(&self.rows, &[n, m]).1
    }

    /// <n,m| sum_out h(out) |out><out| |n,m> for all n <= n_max, m <= m_max,
    /// each h evaluated in one pass; indexed [n][m][h].
    pub fn diagonal_expectations(&self, n_max: u32, m_max: u32, hs: &[CountFn], exec: Exec) -> Vec<Vec<Vec<f64>>> {
        let k = self.counters();
        let s_row: Vec<C64> = self.rows.row(0).iter().copied().collect();
        let r_row: Vec<C64> = self.rows.row(1).iter().copied().collect();
        exec.map_range(0..n_max as usize + 1, |n| {
            let n = n as u32;
            let mut tables = ExpansionTables::new(k);
            let mut poly = vec![C64::new(1.0, 0.0)];
            for j in 1..=n {
                poly = tables.create(&poly, j - 1, &s_row, j as f64);
            }
            let mut out = Vec::with_capacity(m_max as usize + 1);
            for m in 0..=m_max {
                if m > 0 {
                    poly = tables.create(&poly, n + m - 1, &r_row, m as f64);
                }
                let flat = tables.tuples(n + m);
                let mut acc = vec![0.0; hs.len()];
                for (idx, amp) in poly.iter().enumerate() {
                    let p = amp.norm_sqr();
                    if p == 0.0 {
                        continue;
                    }
                    let t = &flat[idx * k..(idx + 1) * k];
                    for (a, h) in acc.iter_mut().zip(hs) {
                        *a += p * h(t);
                    }
                }
                out.push(acc);
            }
            out
        })
    }

    /// Pull each outcome function back to the signal/LO box [0, cutoff]^2:
    /// O[(n,m),(n',m')] = sum_out conj(A_{n,m}(out)) h(out) A_{n',m'}(out).
    pub fn pulled_back(&self, cutoff: u32, hs: &[CountFn], exec: Exec) -> Result<(Arc<ModeSpace>, Vec<DMatrix<C64>>)> {
        if cutoff > 20 {
            return invalid(format!("pulled-back operators are limited to cutoff 20, got {cutoff}"));
        }
        let space = ModeSpace::boxed(&[cutoff, cutoff])?.shared();
        let sectors: Vec<(u32, Vec<usize>)> = space.sectors().into_iter().collect();
        let k = self.counters();
        let blocks = exec.map(&sectors, |(total, members)| {
            let mut tables = ExpansionTables::new(k);
            let amps: Vec<Vec<C64>> = members
                .iter()
                .map(|&i| {
                    let o = space.occupation(i);
                    self.expand(&mut tables, o[0], o[1])
                })
                .collect();
            let flat = tables.tuples(*total);
            let d = members.len();
            let mut out = vec![DMatrix::<C64>::zeros(d, d); hs.len()];
            for idx in 0..amps[0].len() {
                let t = &flat[idx * k..(idx + 1) * k];
                let vals: Vec<f64> = hs.iter().map(|h| h(t)).collect();
                for a in 0..d {
                    let ca = amps[a][idx].conj();
                    if ca == C64::default() {
                        continue;
                    }
                    for b in 0..d {
                        let w = ca * amps[b][idx];
                        for (o, v) in out.iter_mut().zip(&vals) {
                            o[(a, b)] += w * *v;
                        }
                    }
                }
            }
            out
        });
        let dim = space.dim();
        let mut ops = vec![DMatrix::<C64>::zeros(dim, dim); hs.len()];
        for ((_, members), block) in sectors.iter().zip(blocks) {
            for (o, b) in ops.iter_mut().zip(block) {
                for (a, &i) in members.iter().enumerate() {
                    for (c, &j) in members.iter().enumerate() {
                        o[(i, j)] = b[(a, c)];
                    }
                }
            }
        }
        Ok((space, ops))
    }
}

/// e^{-i theta n_r} O e^{i theta n_r} on a signal/LO space.
pub fn rotate_lo(op: &DMatrix<C64>, space: &ModeSpace, theta: f64) -> DMatrix<C64> {
    DMatrix::from_fn(op.nrows(), op.ncols(), |i, j| {
        let d = space.occupation(i)[1] as f64 - space.occupation(j)[1] as f64;
        op[(i, j)] * C64::from_polar(1.0, -theta * d)
    })
}

/// Anti-normally ordered a^p (a^dag)^q, the operator that beta^p beta*^q
/// integrates to against |beta><beta|:
/// <n| . |n'> = delta_{n+p, n'+q} (n+p)! / sqrt(n! n'!).
pub fn antinormal(p: u32, q: u32, cutoff: u32) -> DMatrix<C64> {
    let d = cutoff as usize + 1;
    DMatrix::from_fn(d, d, |n, np| {
        if n + p as usize != np + q as usize {
            return C64::default();
        }
        let v = factorial((n + p as usize) as u64) / (factorial(n as u64) * factorial(np as u64)).sqrt();
        C64::new(v, 0.0)
    })
}

/// sum_m M_m^dag X M_m with M_m = sum_n |n><n, m-n|, written out on a
/// signal/LO space: entries X[n, n'] wherever totals agree.
pub fn lambda_adjoint(x: &DMatrix<C64>, space: &ModeSpace) -> DMatrix<C64> {
    let d = space.dim();
    DMatrix::from_fn(d, d, |i, j| {
        let (a, b) = (space.occupation(i), space.occupation(j));
        if a[0] + a[1] != b[0] + b[1] {
            C64::default()
        } else {
            x[(a[0] as usize, b[0] as usize)]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuits_are_isometries_on_signal_and_lo() {
        assert!(PairCircuit::homodyne().isometry_defect() < 1e-15);
        assert!(PairCircuit::heterodyne().isometry_defect() < 1e-15);
    }

    #[test]
    fn antinormal_of_beta_beta_star_is_n_plus_one() {
        let m = antinormal(1, 1, 6);
        for n in 0..7 {
            assert!((m[(n, n)].re - (n + 1) as f64).abs() < 1e-14);
        }
    }
}
