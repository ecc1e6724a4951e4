//! Diagonal matrix elements of the correction operators on |n, m>_{sr}
//! against their closed forms.
//!
//! Each family is the vacuum-ancilla expectation of a count function on
//! the Fock input |n, m> minus the squashed-side term it is compared with:
//!
//! | family | operator     | subtracted     |
//! |--------|--------------|----------------|
//! | a1     | f_hom        | n^2 + n + 1/2  |
//! | 503    | f_het        | n^2 + 3n + 2   |
//! | 501    | g_hom        | n + 1/2        |
//! | 502    | g_het        | n + 1          |
//!
//! The operators are phase independent on the diagonal, so theta = 0.

use serde::Serialize;

use fock_core::Exec;

use crate::circuit::{CountFn, PairCircuit};
use crate::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagonalFamily {
    A1,
    F503,
    F501,
    F502,
}

impl DiagonalFamily {
    pub const ALL: [DiagonalFamily; 4] = [DiagonalFamily::A1, DiagonalFamily::F503, DiagonalFamily::F501, DiagonalFamily::F502];

    pub fn label(self) -> &'static str {
        match self {
            DiagonalFamily::A1 => "a1",
            DiagonalFamily::F503 => "503",
            DiagonalFamily::F501 => "501",
            DiagonalFamily::F502 => "502",
        }
    }

    fn heterodyne(self) -> bool {
        matches!(self, DiagonalFamily::F503 | DiagonalFamily::F502)
    }

    fn subtracted(self, n: f64) -> f64 {
        match self {
            DiagonalFamily::A1 => n * n + n + 0.5,
            DiagonalFamily::F503 => n * n + 3.0 * n + 2.0,
            DiagonalFamily::F501 => n + 0.5,
            DiagonalFamily::F502 => n + 1.0,
        }
    }

    /// The final line of each derivation.
    pub fn closed_form(self, n: u32, m: u32) -> f64 {
        let (n, mf) = (n as f64, m as f64);
        let t = 0.5f64.powi(m as i32);
        // the common "1 - (1 + m + m(m-1)/2) 2^-m" factor
        let tail = 1.0 - (1.0 + mf + mf * (mf - 1.0) / 2.0) * t;
        let (m1, m2) = (mf + 1.0, mf + 2.0);
        match self {
            DiagonalFamily::A1 => {
                (1.0 - t) / (3.0 * m1)
                    + mf * (9.0 * mf * mf + 17.0 * mf + 6.0) * t / (12.0 * m1)
                    + mf * (4.0 + (3.0 * mf * mf + 8.0 * mf + 3.0) * t) * n / (6.0 * m1 * m2)
                    + 2.0 * (2.0 * mf + 5.0) * n * n / (m1 * m2) * tail
                    + mf * (4.0 * (mf - 1.0).powi(2) + 15.0 * (mf - 1.0) + 2.0) * n * n * t / (4.0 * m1 * m2)
            }
            DiagonalFamily::F503 => {
                2.0 * (1.0 - t) / m1
                    + mf * (3.0 * mf + 1.0) * t / (2.0 * m1)
                    + mf * (8.0 * (mf - 1.0).powi(2) + 27.0 * (mf - 1.0) + 2.0) * t * n / (2.0 * m1 * m2)
                    + mf * (3.0 * mf - 1.0) * (mf + 3.0) * t * n * (n - 1.0) / (m1 * m2)
                    + (4.0 * (2.0 * mf + 3.0) + 8.0 * (mf + 3.0) * n) / (m1 * m2) * tail * n
            }
            DiagonalFamily::F501 => n / m1 * (1.0 - (1.0 + mf / 2.0) * t) + mf * t / 2.0,
            DiagonalFamily::F502 => n / m1 * (2.0 - (2.0 + mf) * t),
        }
    }
}

fn delta0(n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        0.0
    }
}

// Count functions, counters in detector order (0 first).

fn f_hom(c: &[u32]) -> f64 {
    let s = (c[1] + c[2]) as f64;
    let d = c[1] as f64 - c[2] as f64;
    let m = c[0] as f64;
    delta0(c[0]) * (0.75 * s * s + 7.0 / 6.0 * s + 0.5) + d.powi(4) / (6.0 * (m + 1.0) * (m + 2.0))
}

fn g_hom(c: &[u32]) -> f64 {
    let d = c[1] as f64 - c[2] as f64;
    0.5 * delta0(c[0]) * (c[1] + c[2] + 1) as f64 + d * d / (2.0 * (c[0] + 1) as f64)
}

fn het_q(c: &[u32]) -> f64 {
    (c[1] as f64 - c[2] as f64).powi(2) + (c[3] as f64 - c[4] as f64).powi(2)
}

fn f_het(c: &[u32]) -> f64 {
    let s = (c[1] + c[2] + c[3] + c[4]) as f64;
    let n0 = c[0] as f64;
    let q = het_q(c);
    delta0(c[0]) * (3.5 * s + 2.0) + q * q / ((n0 + 1.0) * (n0 + 2.0))
}

fn g_het(c: &[u32]) -> f64 {
    delta0(c[0]) + het_q(c) / (c[0] + 1) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalPoint {
    pub n: u32,
    pub m: u32,
    pub closed_form: f64,
    pub direct: f64,
    /// |closed - direct|.
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub family: DiagonalFamily,
    pub n_max: u32,
    pub m_max: u32,
    pub points: Vec<DiagonalPoint>,
    pub max_abs_error: f64,
    /// |closed - direct| / max(1, |direct|), worst over the grid.
    pub max_rel_error: f64,
    pub worst_at: (u32, u32),
    pub min_closed_form: f64,
    pub min_at: (u32, u32),
}

impl DiagonalReport {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn agrees(&self) -> bool {
        self.max_rel_error <= Self::TOLERANCE
    }

    /// Exact zeros may come out at -1e-16 in floating point.
    pub fn non_negative(&self) -> bool {
        self.min_closed_form >= -1e-12
    }

    pub fn passed(&self) -> bool {
        self.agrees() && self.non_negative()
    }
}

/// Compare the closed form with the brute-force Fock computation over
/// 0 <= n <= n_max, 0 <= m <= m_max.
pub fn check_diagonal_formulas(family: DiagonalFamily, n_max: u32, m_max: u32, exec: Exec) -> Result<DiagonalReport> {
    if n_max > 40 || m_max > 40 {
        return invalid(format!("diagonal grid is limited to 40, got n <= {n_max}, m <= {m_max}"));
    }
    let (circuit, h): (PairCircuit, CountFn) = match family {
        DiagonalFamily::A1 => (PairCircuit::homodyne(), &f_hom),
        DiagonalFamily::F501 => (PairCircuit::homodyne(), &g_hom),
        DiagonalFamily::F503 => (PairCircuit::heterodyne(), &f_het),
        DiagonalFamily::F502 => (PairCircuit::heterodyne(), &g_het),
    };
    debug_assert_eq!(circuit.counters() == 5, family.heterodyne());
    let table = circuit.diagonal_expectations(n_max, m_max, &[h], exec);
    let mut points = Vec::new();
    let (mut max_abs, mut max_rel, mut worst_at) = (0.0f64, 0.0f64, (0, 0));
    let (mut min_closed, mut min_at) = (f64::INFINITY, (0, 0));
    for n in 0..=n_max {
        for m in 0..=m_max {
            let direct = table[n as usize][m as usize][0] - family.subtracted(n as f64);
            let closed = family.closed_form(n, m);
            let err = (closed - direct).abs();
            let rel = err / direct.abs().max(1.0);
            if rel > max_rel {
                max_rel = rel;
                worst_at = (n, m);
            }
            max_abs = max_abs.max(err);
            if closed < min_closed {
                min_closed = closed;
                min_at = (n, m);
            }
            points.push(DiagonalPoint { n, m, closed_form: closed, direct, deficit: err });
        }
    }
    Ok(DiagonalReport {
        family,
        n_max,
        m_max,
        points,
        max_abs_error: max_abs,
        max_rel_error: max_rel,
        worst_at,
        min_closed_form: min_closed,
        min_at,
    })
}
