use fock_core::operator::{number_operator, quadrature_operator, quadrature_squared, symmetrized_xp};
use fock_core::error::Result;
use fock_core::{DensityOperator, Operator, State, C64};

use crate::bad;

/// The functions f(beta) whose anti-normally ordered operators the
/// heterodyne bounds need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HetMomentKind {
    /// beta_theta
    First(f64),
    /// beta_theta^2
    Second(f64),
    /// beta_0 beta_{pi/2}
    Cross,
    /// |beta|^2
    Intensity,
}

/// Closed forms: x(theta), x(theta)^2 + 1/4, (xp+px)/2 and n + 1.
pub fn het_moment_operator(kind: HetMomentKind, cutoff: u32) -> Operator {
    match kind {
        HetMomentKind::First(t) => quadrature_operator(t, cutoff),
        HetMomentKind::Second(t) => {
            let x2 = quadrature_squared(t, cutoff);
            let id = Operator::identity(x2.space().clone()).scale(C64::new(0.25, 0.0));
            x2.add(&id).expect("same space")
        }
        HetMomentKind::Cross => symmetrized_xp(cutoff),
        HetMomentKind::Intensity => {
            let n = number_operator(cutoff);
            n.add(&Operator::identity(n.space().clone())).expect("same space")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomMoments {
    pub first: f64,
    pub second: f64,
    /// Tr[(xp+px)/2 rho]
    pub cross: f64,
}

pub fn ideal_hom_moments(rho_v: &DensityOperator, theta: f64) -> Result<HomMoments> {
    if rho_v.space().mode_count() != 1 {
        return Err(bad("ideal moments need a one-mode state"));
    }
    let c = rho_v.space().cutoffs()[0];
    let s = State::Mixed(rho_v.clone());
    let ev = |op: Operator| op.expect(&s).map(|z| z.re);
    Ok(HomMoments {
        first: ev(quadrature_operator(theta, c))?,
        second: ev(quadrature_squared(theta, c))?,
        cross: ev(symmetrized_xp(c))?,
    })
}
