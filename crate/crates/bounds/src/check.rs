use std::f64::consts::FRAC_PI_4;

use detection::{
    het_moments, hom_moments, hybrid_statistics, pair_statistics, Backend, IdealReadout, MultiInput, PairInput,
    PairReadout,
};
use fock_core::operator::quadrature_operator;
use fock_core::special::default_cutoff;
use fock_core::{DensityOperator, Exec, Operator, State};
use squash::{het_moment_operator, ideal_hom_moments, squash_state, squash_with_coherent_lo, HetMomentKind};

use crate::{BoundConstants, Inequality, MomentComparison, Result};

/// Squashed output of one pair with the deficit it inherits.
pub struct PairIdeal {
    pub rho_v: DensityOperator,
    pub deficit: f64,
}

pub fn ideal_pair_state(input: &PairInput) -> Result<PairIdeal> {
    Ok(match input {
        PairInput::Joint(s) => PairIdeal { rho_v: squash_state(s)?, deficit: s.deficit() },
        _ => {
            let (signal, beta) = input.signal_and_beta()?;
            PairIdeal { rho_v: squash_with_coherent_lo(&signal.to_density(), beta)?, deficit: signal.deficit() }
        }
    })
}

/// Largest photon total the backends may have to represent for this input.
pub fn pair_scale(input: &PairInput) -> f64 {
    match input {
        PairInput::Joint(s) => s.space().max_total() as f64,
        PairInput::SignalWithCoherentLo { signal, beta } => {
            (signal.space().max_total() + default_cutoff(beta.norm_sqr())) as f64
        }
        PairInput::CoherentProduct { alpha, beta } => {
            (default_cutoff(alpha.norm_sqr()) + default_cutoff(beta.norm_sqr())) as f64
        }
    }
}

fn expect_v(rho: &DensityOperator, op: &Operator) -> Result<f64> {
    Ok(op.expect(&State::Mixed(rho.clone()))?.re)
}

/// First moment, second moment at `theta` and the symmetrized cross term.
pub fn check_theorem1(
    input: &PairInput,
    theta: f64,
    backend: Backend,
    consts: &BoundConstants,
    exec: Exec,
) -> Result<[MomentComparison; 3]> {
    let ideal = ideal_pair_state(input)?;
    let at = ideal_hom_moments(&ideal.rho_v, theta)?;
    let rep = hom_moments(input, &[theta, FRAC_PI_4, 3.0 * FRAC_PI_4], backend, exec)?;
    let (z, z2) = rep.at(theta).expect("requested");
    let (_, za) = rep.at(FRAC_PI_4).expect("requested");
    let (_, zb) = rep.at(3.0 * FRAC_PI_4).expect("requested");
    let deficit = rep.deficit + ideal.deficit;
    let scale = pair_scale(input);
    let cmp = |i, a, b| MomentComparison::new(i, a, b, rep.d_hom, deficit, scale, consts);
    Ok([
        cmp(Inequality::Lh1, at.first, z),
        cmp(Inequality::Lh2, at.second, z2),
        cmp(Inequality::Lh2m, at.cross, 0.5 * (za - zb)),
    ])
}

/// Heterodyne counterpart: alpha_theta, alpha_theta^2 and alpha_0 alpha_{pi/2}.
pub fn check_theorem4(
    input: &PairInput,
    theta: f64,
    backend: Backend,
    consts: &BoundConstants,
    exec: Exec,
) -> Result<[MomentComparison; 3]> {
    let ideal = ideal_pair_state(input)?;
    let c = ideal.rho_v.space().cutoffs()[0];
    let ev = |k| expect_v(&ideal.rho_v, &het_moment_operator(k, c));
    let rep = het_moments(input, backend, exec)?;
    let deficit = rep.deficit + ideal.deficit;
    let scale = pair_scale(input);
    let cmp = |i, a, b| MomentComparison::new(i, a, b, rep.d_het, deficit, scale, consts);
    Ok([
        cmp(Inequality::Le1, ev(HetMomentKind::First(theta))?, rep.alpha_theta(theta)),
        cmp(Inequality::Le2, ev(HetMomentKind::Second(theta))?, rep.alpha_theta2(theta)),
        cmp(Inequality::Le2m, ev(HetMomentKind::Cross)?, rep.cross),
    ])
}

fn readout_angle(r: PairReadout) -> f64 {
    match r {
        PairReadout::Hom(t) | PairReadout::Het(t) => t,
    }
}

fn multi_scale(input: &MultiInput) -> f64 {
    let base = input.state().space().max_total();
    let lo: u32 = match input {
        MultiInput::Joint { .. } => 0,
        MultiInput::CoherentLo { pairs, .. } => pairs.iter().map(|p| default_cutoff(p.1.norm_sqr())).sum(),
    };
    (base + lo) as f64
}

/// Correlation of two implemented pairs against the squashed pair of the
/// same readout kinds. The ideal observable for both readouts is x(theta),
/// since F(beta_theta) = x(theta).
pub fn check_theorem2(
    input: &MultiInput,
    k: usize,
    rk: PairReadout,
    l: usize,
    rl: PairReadout,
    backend: Backend,
    consts: &BoundConstants,
    exec: Exec,
) -> Result<MomentComparison> {
    let imp = pair_statistics(input, k, rk, l, rl, backend, exec)?;
    let (tk, tl) = (readout_angle(rk), readout_angle(rl));
    let xk = input.ideal_operator(k, |c| quadrature_operator(tk, c))?;
    let xl = input.ideal_operator(l, |c| quadrature_operator(tl, c))?;
    let (mk, ml) = (input.pair_modes(k), input.pair_modes(l));
    let ideal = input.expect(&[(&mk, &xk), (&ml, &xl)])?;
    let ineq = match (rk, rl) {
        (PairReadout::Hom(_), PairReadout::Hom(_)) => Inequality::LhLh,
        (PairReadout::Het(_), PairReadout::Het(_)) => Inequality::LeLe,
        _ => Inequality::LhLe,
    };
    Ok(MomentComparison::new(ineq, ideal, imp.correlation, imp.d, imp.deficit, multi_scale(input), consts))
}

/// Ideal detector on `ideal_mode`, implemented circuit on pair `pair`.
#[allow(clippy::too_many_arguments)]
pub fn check_theorem3_6(
    input: &MultiInput,
    ideal_mode: usize,
    first: IdealReadout,
    pair: usize,
    second: PairReadout,
    backend: Backend,
    consts: &BoundConstants,
    exec: Exec,
) -> Result<MomentComparison> {
    let imp = hybrid_statistics(input, ideal_mode, first, pair, second, backend, exec)?;
    let phi = match first {
        IdealReadout::Hom(p) | IdealReadout::Het(p) => p,
    };
    let theta = readout_angle(second);
    let x1 = input.mode_operator(ideal_mode, |c| quadrature_operator(phi, c));
    let x2 = input.ideal_operator(pair, |c| quadrature_operator(theta, c))?;
    let pm = input.pair_modes(pair);
    let ideal = input.expect(&[(&[ideal_mode], &x1), (&pm, &x2)])?;
    let ineq = match (first, second) {
        (IdealReadout::Hom(_), PairReadout::Hom(_)) => Inequality::GhLh,
        (IdealReadout::Hom(_), PairReadout::Het(_)) => Inequality::GhLe,
        (IdealReadout::Het(_), PairReadout::Het(_)) => Inequality::GeLe,
        (IdealReadout::Het(_), PairReadout::Hom(_)) => Inequality::GeLh,
    };
    Ok(MomentComparison::new(ineq, ideal, imp.correlation, imp.weight, imp.deficit, multi_scale(input), consts))
}

