//! Outcome statistics of the implemented detectors and their correction
//! functions. Count arrays are stored detector-index first: `[n0, n1, n2]`
//! for the homodyne circuit and `[n0', n1', n2', n3', n4']` for the
//! heterodyne one.

use std::f64::consts::SQRT_2;

use fock_core::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountsHom {
    pub n0: u32,
    pub n1: u32,
    pub n2: u32,
    pub theta: f64,
}

impl CountsHom {
    pub fn from_slice(c: &[u32], theta: f64) -> Self {
        Self { n0: c[0], n1: c[1], n2: c[2], theta }
    }

    pub fn z(&self) -> f64 {
        z_value(self.n1, self.n2, self.n0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountsHet {
    pub n0p: u32,
    pub n1p: u32,
    pub n2p: u32,
    pub n3p: u32,
    pub n4p: u32,
}

impl CountsHet {
    pub fn from_slice(c: &[u32]) -> Self {
        Self { n0p: c[0], n1p: c[1], n2p: c[2], n3p: c[3], n4p: c[4] }
    }

    pub fn alpha(&self) -> C64 {
        alpha_value(self)
    }
}

/// (n1 - n2) / sqrt(2 (n0 + n1 + n2 + 1))
pub fn z_value(n1: u32, n2: u32, n0: u32) -> f64 {
    (n1 as f64 - n2 as f64) / (2.0 * (n0 + n1 + n2 + 1) as f64).sqrt()
}

pub fn alpha_value(c: &CountsHet) -> C64 {
    let n = (c.n0p + c.n1p + c.n2p + c.n3p + c.n4p + 1) as f64;
    let re = c.n1p as f64 - c.n2p as f64;
    let im = c.n3p as f64 - c.n4p as f64;
    C64::new(re, im) * (SQRT_2 / n.sqrt())
}

pub fn alpha_theta(c: &CountsHet, theta: f64) -> f64 {
    let a = alpha_value(c);
    a.re * theta.cos() + a.im * theta.sin()
}

fn delta0(n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        0.0
    }
}

pub fn f_hom(n1: u32, n2: u32, n0: u32) -> f64 {
    let s = (n1 + n2) as f64;
    let d = n1 as f64 - n2 as f64;
    let m = n0 as f64;
    delta0(n0) * (0.75 * s * s + 7.0 / 6.0 * s + 0.5) + d.powi(4) / (6.0 * (m + 1.0) * (m + 2.0))
}

pub fn g_hom(n1: u32, n2: u32, n0: u32) -> f64 {
    let d = n1 as f64 - n2 as f64;
    0.5 * delta0(n0) * (n1 + n2 + 1) as f64 + d * d / (2.0 * (n0 + 1) as f64)
}

pub fn f_het(n1p: u32, n2p: u32, n3p: u32, n4p: u32, n0p: u32) -> f64 {
    let s = (n1p + n2p + n3p + n4p) as f64;
    let q = (n1p as f64 - n2p as f64).powi(2) + (n3p as f64 - n4p as f64).powi(2);
    let n0 = n0p as f64;
    delta0(n0p) * (3.5 * s + 2.0) + q * q / ((n0 + 1.0) * (n0 + 2.0))
}

/// Five arguments; the sixth that appears once in the multi-pair
/// definition has no role anywhere else.
pub fn g_het(n1p: u32, n2p: u32, n3p: u32, n4p: u32, n0p: u32) -> f64 {
    let q = (n1p as f64 - n2p as f64).powi(2) + (n3p as f64 - n4p as f64).powi(2);
    delta0(n0p) + q / (n0p + 1) as f64
}

/// Per-setting term f_hom / (N + 1) on an `[n0, n1, n2]` array. The four
/// settings of d_hom each carry a further 1/4.
pub fn f_hom_over_n1(c: &[u32]) -> f64 {
    f_hom(c[1], c[2], c[0]) / (c[0] + c[1] + c[2] + 1) as f64
}

pub fn g_hom_counts(c: &[u32]) -> f64 {
    g_hom(c[1], c[2], c[0])
}

pub fn z_counts(c: &[u32]) -> f64 {
    z_value(c[1], c[2], c[0])
}

/// d_het = f_het / (N + 1) on an `[n0', .., n4']` array.
pub fn d_het_counts(c: &[u32]) -> f64 {
    f_het(c[1], c[2], c[3], c[4], c[0]) / (c.iter().sum::<u32>() + 1) as f64
}

pub fn g_het_counts(c: &[u32]) -> f64 {
    g_het(c[1], c[2], c[3], c[4], c[0])
}

pub fn alpha_counts(c: &[u32]) -> C64 {
    alpha_value(&CountsHet::from_slice(c))
}

/// The four phase settings entering d_hom.
pub const HOM_SETTINGS: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_2,
    3.0 * std::f64::consts::FRAC_PI_4,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(z_value(3, 3, 0), 0.0);
        assert!((z_value(3, 1, 0) - 2.0 / 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(z_value(0, 0, 7), 0.0);
        assert_eq!(f_hom(0, 0, 0), 0.5);
        assert_eq!(g_hom(0, 0, 0), 0.5);
        assert!((f_hom(2, 0, 1) - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(f_het(0, 0, 0, 0, 0), 2.0);
        assert_eq!(g_het(0, 0, 0, 0, 0), 1.0);
        let c = |a: [u32; 5]| CountsHet::from_slice(&a).alpha();
        assert_eq!(c([0; 5]), C64::default());
        assert!((c([0, 1, 0, 0, 0]) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let want = C64::new(SQRT_2, SQRT_2) / 3f64.sqrt();
        assert!((c([0, 1, 0, 1, 0]) - want).norm() < 1e-15);
    }
}
