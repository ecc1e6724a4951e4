//! Ladder-operator identities on the signal/LO pair, each side built
//! independently: one from the adjoint squashing map or the rebuilt
//! circuit, the other written out entry by entry from its closed ladder
//! form.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use nalgebra::DMatrix;
use serde::Serialize;

use fock_core::operator::{number_operator, quadrature_operator, quadrature_squared, symmetrized_xp};
use fock_core::{Exec, ModeSpace, C64};

use crate::circuit::{antinormal, lambda_adjoint, rotate_lo, CountFn, PairCircuit};
use crate::{invalid, Result};

pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Phases at which the phase-covariant identities are sampled.
const THETAS: [f64; 5] = [0.0, 0.37, FRAC_PI_4, FRAC_PI_2, 2.1];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    /// Largest entrywise |lhs - rhs|.
    pub max_error: f64,
    /// False for the as-printed variant that is known not to hold.
    pub expected_to_hold: bool,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.max_error <= IDENTITY_TOLERANCE
    }

    /// Holds when expected to, fails when not.
    pub fn as_expected(&self) -> bool {
        self.holds() == self.expected_to_hold
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub cutoff: u32,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::as_expected)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// sum coef(n, m) |n, m-k><n-k, m| + h.c. over the entries inside `space`.
fn ladder(space: &ModeSpace, k: u32, coef: impl Fn(f64, f64) -> C64) -> DMatrix<C64> {
    let d = space.dim();
    let mut out = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        let o = space.occupation(i);
        let (n, mm) = (o[0], o[1]);
        // i = |n, m-k>, so m = mm + k
        if n < k {
            continue;
        }
        if let Some(j) = space.index_of(&[n - k, mm + k]) {
            let c = coef(n as f64, (mm + k) as f64);
            out[(i, j)] += c;
            out[(j, i)] += c.conj();
        }
    }
    out
}

fn diagonal(space: &ModeSpace, f: impl Fn(f64, f64) -> f64) -> DMatrix<C64> {
    let d = space.dim();
    DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let o = space.occupation(i);
            C64::new(f(o[0] as f64, o[1] as f64), 0.0)
        } else {
            C64::default()
        }
    })
}

fn z_hom(c: &[u32]) -> f64 {
    (c[1] as f64 - c[2] as f64) / (2.0 * (c[0] + c[1] + c[2] + 1) as f64).sqrt()
}

fn z_het_re(c: &[u32]) -> f64 {
    std::f64::consts::SQRT_2 * (c[1] as f64 - c[2] as f64) / ((c.iter().sum::<u32>() + 1) as f64).sqrt()
}

fn z_het_im(c: &[u32]) -> f64 {
    std::f64::consts::SQRT_2 * (c[3] as f64 - c[4] as f64) / ((c.iter().sum::<u32>() + 1) as f64).sqrt()
}

/// Compare every identity on the box [0, cutoff]^2.
pub fn check_operator_identities(cutoff: u32, exec: Exec) -> Result<IdentityReport> {
    if !(2..=20).contains(&cutoff) {
        return invalid(format!("identity cutoff must lie in 2..=20, got {cutoff}"));
    }
    let one = C64::new(1.0, 0.0);
    let i_unit = C64::new(0.0, 1.0);

    let z2 = |c: &[u32]| z_hom(c).powi(2);
    let hom_fns: [CountFn; 2] = [&z_hom, &z2];
    let (space, hom) = PairCircuit::homodyne().pulled_back(cutoff, &hom_fns, exec)?;
    let (zh, zh2) = (&hom[0], &hom[1]);

    let re2 = |c: &[u32]| z_het_re(c).powi(2);
    let im2 = |c: &[u32]| z_het_im(c).powi(2);
    let cross = |c: &[u32]| z_het_re(c) * z_het_im(c);
    let het_fns: [CountFn; 5] = [&z_het_re, &z_het_im, &re2, &im2, &cross];
    let (het_space, het) = PairCircuit::heterodyne().pulled_back(cutoff, &het_fns, exec)?;
    debug_assert_eq!(het_space.basis(), space.basis());

    let lam = |x: &DMatrix<C64>| lambda_adjoint(x, &space);
    let x = |t: f64| quadrature_operator(t, cutoff).into_matrix();
    let x2 = |t: f64| quadrature_squared(t, cutoff).into_matrix();
    let eye1 = DMatrix::<C64>::identity(cutoff as usize + 1, cutoff as usize + 1);
    let eye2 = DMatrix::<C64>::identity(space.dim(), space.dim());

    // closed ladder forms
    let l_x = ladder(&space, 1, |n, _| one * (n.sqrt() / 2.0));
    let l_zhom = ladder(&space, 1, |n, m| one * ((m / (m + n)).sqrt() * n.sqrt() / 2.0));
    let l_x2 = ladder(&space, 2, |n, _| one * ((n * (n - 1.0)).sqrt() / 4.0)) + diagonal(&space, |n, _| n / 2.0 + 0.25);
    let l_z2 = ladder(&space, 2, |n, m| one * ((n * (n - 1.0)).sqrt() / 4.0 * (m * (m - 1.0)).sqrt() / (m + n - 1.0)))
        + diagonal(&space, |n, m| n / 2.0 + 0.25 - (2.0 * n * n + n + 1.0) / (4.0 * (m + n + 1.0)));
    let y_i = ladder(&space, 2, |n, _| i_unit * ((n * (n - 1.0)).sqrt() / 4.0));
    let y_r = ladder(&space, 2, |n, m| i_unit * ((n * (n - 1.0)).sqrt() / 4.0 * (m * (m - 1.0)).sqrt() / (m + n - 1.0)));
    let y_r_printed =
        ladder(&space, 2, |n, m| i_unit * ((n * (n - 1.0)).sqrt() / 4.0 * (m * (m - 1.0)).sqrt() / (m + n + 1.0)));

    // anti-normal moment operators
    let f_beta = |t: f64| (antinormal(1, 0, cutoff) * C64::from_polar(1.0, -t) + antinormal(0, 1, cutoff) * C64::from_polar(1.0, t)) * C64::new(0.5, 0.0);
    let f_beta2 = |t: f64| {
        (antinormal(2, 0, cutoff) * C64::from_polar(1.0, -2.0 * t)
            + antinormal(1, 1, cutoff) * C64::new(2.0, 0.0)
            + antinormal(0, 2, cutoff) * C64::from_polar(1.0, 2.0 * t))
            * C64::new(0.25, 0.0)
    };
    // Re(beta) Im(beta) = (beta^2 - beta*^2) / 4i
    let f_cross = (antinormal(2, 0, cutoff) - antinormal(0, 2, cutoff)) * (C64::new(0.0, -0.25));

    let z_het = |t: f64| &het[0] * C64::new(t.cos(), 0.0) + &het[1] * C64::new(t.sin(), 0.0);
    let z_het2 = |t: f64| {
        let (c, s) = (t.cos(), t.sin());
        &het[2] * C64::new(c * c, 0.0) + &het[3] * C64::new(s * s, 0.0) + &het[4] * C64::new(2.0 * s * c, 0.0)
    };
    let het_extra = diagonal(&space, |n, m| (m + 2.0 * n) / (4.0 * (m + n + 1.0)));
    let worst = |f: &dyn Fn(f64) -> f64| THETAS.iter().map(|&t| f(t)).fold(0.0, f64::max);

    let squash_space = ModeSpace::boxed(&[cutoff, cutoff])?;
    let squash_err = worst(&|t| {
        let op = quadrature_squared(t, cutoff);
        squash::squash_adjoint(&op, &squash_space)
            .map(|a| max_diff(a.matrix(), &lam(op.matrix())))
            .unwrap_or(f64::INFINITY)
    });

    let mk = |name, statement, max_error, expected_to_hold| IdentityCheck { name, statement, max_error, expected_to_hold };
    let checks = vec![
        mk("lambda_adj_x", "Lambda^dag(x(0)) = sum sqrt(n)/2 (|n,m-1><n-1,m| + h.c.)", max_diff(&lam(&x(0.0)), &l_x), true),
        mk(
            "z_hom_first",
            "<0|z_hom(0)|0>_a = sum sqrt(m/(m+n)) sqrt(n)/2 (|n,m-1><n-1,m| + h.c.)",
            max_diff(zh, &l_zhom),
            true,
        ),
        mk(
            "lambda_adj_x2",
            "Lambda^dag(x(0)^2) = sum sqrt(n(n-1))/4 (|n,m-2><n-2,m| + h.c.) + (n/2+1/4)",
            max_diff(&lam(&x2(0.0)), &l_x2),
            true,
        ),
        mk(
            "z_hom_second",
            "<0|z_hom(0)^2|0>_a = sum sqrt(n(n-1)m(m-1))/(4(m+n-1)) (.. + h.c.) + n/2+1/4-(2n^2+n+1)/(4(m+n+1))",
            max_diff(zh2, &l_z2),
            true,
        ),
        mk(
            "z_het_rotated",
            "e^{i t n_r} <0|z_het(t)|0> e^{-i t n_r} = <0|z_hom(0)|0>_a",
            worst(&|t| max_diff(&rotate_lo(&z_het(t), &space, -t), zh)),
            true,
        ),
        mk(
            "z_het_second_rotated",
            "e^{i t n_r} <0|z_het(t)^2|0> e^{-i t n_r} = <0|z_hom(0)^2|0>_a + (m+2n)/(4(m+n+1))",
            worst(&|t| max_diff(&rotate_lo(&z_het2(t), &space, -t), &(zh2 + &het_extra))),
            true,
        ),
        mk(
            "y_imag_quadratures",
            "Lambda^dag(x(pi/4)^2 - x(3pi/4)^2)/2 = Y_I",
            max_diff(&(lam(&(x2(FRAC_PI_4) - x2(3.0 * FRAC_PI_4))) * C64::new(0.5, 0.0)), &y_i),
            true,
        ),
        mk("y_imag_f", "Lambda^dag(F(beta_0 beta_pi/2)) = Y_I", max_diff(&lam(&f_cross), &y_i), true),
        mk(
            "y_real_hom",
            "<0|z_hom(pi/4)^2 - z_hom(3pi/4)^2|0>_a / 2 = Y_R",
            max_diff(
                &((rotate_lo(zh2, &space, FRAC_PI_4) - rotate_lo(zh2, &space, 3.0 * FRAC_PI_4)) * C64::new(0.5, 0.0)),
                &y_r,
            ),
            true,
        ),
        mk("y_real_het", "<0|z_het(0) z_het(pi/2)|0> = Y_R", max_diff(&het[4], &y_r), true),
        mk(
            "y_real_printed_denominator",
            "<0|z_het(0) z_het(pi/2)|0> = Y_R with 1/(m+n+1) in place of 1/(m+n-1)",
            max_diff(&het[4], &y_r_printed),
            false,
        ),
        mk("f_beta_theta", "F(beta_t) = x(t)", worst(&|t| max_diff(&f_beta(t), &x(t))), true),
        mk(
            "f_beta_theta_squared",
            "F(beta_t^2) = x(t)^2 + 1/4",
            worst(&|t| max_diff(&f_beta2(t), &(x2(t) + &eye1 * C64::new(0.25, 0.0)))),
            true,
        ),
        mk("f_beta_cross", "F(beta_0 beta_pi/2) = (xp + px)/2", max_diff(&f_cross, symmetrized_xp(cutoff).matrix()), true),
        mk(
            "f_beta_abs2",
            "F(|beta|^2) = n + 1",
            max_diff(&antinormal(1, 1, cutoff), &(number_operator(cutoff).into_matrix() + &eye1)),
            true,
        ),
        mk(
            "lambda_adj_f_rotated",
            "e^{i t n_r} Lambda^dag(F(beta_t^2)) e^{-i t n_r} = Lambda^dag(x(0)^2) + 1/4",
            worst(&|t| max_diff(&rotate_lo(&lam(&f_beta2(t)), &space, -t), &(lam(&x2(0.0)) + &eye2 * C64::new(0.25, 0.0)))),
            true,
        ),
        mk(
            "squash_adjoint_library",
            "squash::squash_adjoint(x(t)^2) = sum_m M_m^dag x(t)^2 M_m",
            squash_err,
            true,
        ),
    ];
    Ok(IdentityReport { cutoff, checks })
}
