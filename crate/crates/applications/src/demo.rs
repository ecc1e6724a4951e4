//! Entanglement certification for two-mode squeezed vacuum measured with
//! two implemented homodyne circuits, each fed by its own coherent LO.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use bounds::BoundConstants;
use detection::{Backend, MultiInput};
use fock_core::special::default_cutoff;
use fock_core::state::{coherent_state, tmsv_state};
use fock_core::{DensityOperator, Exec, ModeSpace, State, C64};

use crate::covariance::{estimate_covariance, measure, CovarianceInterval};
use crate::witness::{duan_witness, WitnessResult};
use crate::{invalid, Result};

/// Truncation target for the signal states built here.
pub const STATE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub squeezing: f64,
    pub beta: [f64; 2],
    pub lo_photons: f64,
    pub backend: String,
    pub covariance: CovarianceInterval,
    pub witness: WitnessResult,
    /// e^{-2r}, the sum for the untruncated state under ideal detection.
    pub ideal_sum: f64,
    pub ideal_margin: f64,
    pub state_deficit: f64,
}

/// Smallest cutoff c with tanh(r)^{2(c+1)} <= tol.
pub fn tmsv_cutoff(r: f64, tol: f64) -> u32 {
    let t2 = r.tanh().powi(2);
    if t2 <= tol {
        return 0;
    }
    ((tol.ln() / t2.ln()).ceil() as u32).saturating_sub(1)
}

/// Single-mode thermal state with mean photon number `mean`, cut where the
/// geometric tail drops below `tol`.
pub fn thermal_state(mean: f64, tol: f64) -> Result<DensityOperator> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return invalid("thermal mean must be finite and non-negative");
    }
    let q = mean / (mean + 1.0);
    let cutoff = if q <= tol { 0 } else { ((tol.ln() / q.ln()).ceil() as u32).saturating_sub(1) };
    let d = cutoff as usize + 1;
    let mut m = DMatrix::zeros(d, d);
    for n in 0..d {
        m[(n, n)] = C64::new(q.powi(n as i32) / (mean + 1.0), 0.0);
    }
    let deficit = q.powi(cutoff as i32 + 1);
    Ok(DensityOperator::new(Arc::new(ModeSpace::single(cutoff)), m, deficit)?)
}

/// Witness for an arbitrary two-mode signal state, each mode measured with
/// its own coherent LO.
pub fn separable_witness(
    signals: &State,
    betas: [C64; 2],
    backend: Backend,
    consts: &BoundConstants,
    exec: Exec,
) -> Result<(CovarianceInterval, WitnessResult)> {
    if signals.space().mode_count() != 2 {
        return invalid("the witness needs a two-mode signal state");
    }
    let input = MultiInput::CoherentLo { signals: signals.clone(), pairs: vec![(0, betas[0]), (1, betas[1])] };
    let labels = ["A".to_string(), "B".to_string()];
    let data = measure(&input, Some(&labels), backend, exec)?;
    let cm = estimate_covariance(&data, consts)?;
    let w = duan_witness(&cm)?;
    Ok((cm, w))
}

pub fn entanglement_demo(r: f64, beta: C64, backend: Backend, consts: &BoundConstants, exec: Exec) -> Result<DemoReport> {
    if !(r >= 0.0) || !r.is_finite() {
        return invalid("squeezing must be finite and non-negative");
    }
    if backend == Backend::PoissonProduct {
        return invalid("the Poisson backend only handles coherent signals");
    }
    let state: State = tmsv_state(r, tmsv_cutoff(r, STATE_TOLERANCE))?.into();
    let state_deficit = state.deficit();
    let (covariance, witness) = separable_witness(&state, [beta, beta], backend, consts, exec)?;
    let ideal_sum = (-2.0 * r).exp();
    Ok(DemoReport {
        squeezing: r,
        beta: [beta.re, beta.im],
        lo_photons: beta.norm_sqr(),
        backend: format!("{backend:?}"),
        covariance,
        witness,
        ideal_sum,
        ideal_margin: 1.0 - ideal_sum,
        state_deficit,
    })
}

fn coherent_pair(a: C64, b: C64, cutoff: u32) -> Result<State> {
    Ok(coherent_state(a, cutoff)?.tensor(&coherent_state(b, cutoff)?).into())
}

/// Two-mode states that are separable by construction: coherent products,
/// thermal products, mixed coherent/thermal products and a classically
/// correlated mixture of coherent products. Labels describe the state.
pub fn designed_separable_states() -> Result<Vec<(String, State)>> {
    let mut out = Vec::new();
    for (a, b) in [
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        (C64::new(0.5, 0.0), C64::new(-0.5, 0.0)),
        (C64::new(1.0, 0.5), C64::new(0.0, 0.3)),
        (C64::new(0.7, 0.0), C64::new(0.7, 0.0)),
    ] {
        let c = default_cutoff(a.norm_sqr().max(b.norm_sqr()));
        out.push((format!("coherent({a}) x coherent({b})"), coherent_pair(a, b, c)?));
    }
    for (m1, m2) in [(0.2, 0.2), (0.5, 1.0)] {
        let s = thermal_state(m1, STATE_TOLERANCE)?.tensor(&thermal_state(m2, STATE_TOLERANCE)?);
        out.push((format!("thermal({m1}) x thermal({m2})"), s.into()));
    }
    let a = C64::new(0.6, 0.0);
    let coh: State = coherent_state(a, default_cutoff(a.norm_sqr()))?.into();
    let th: State = thermal_state(0.3, STATE_TOLERANCE)?.into();
    out.push((format!("coherent({a}) x thermal(0.3)"), coh.tensor(&th)));
    // (|a,a><a,a| + |-a,-a><-a,-a|)/2: correlated quadratures, still separable
    let c = default_cutoff(a.norm_sqr());
    let (plus, minus) = (coherent_pair(a, a, c)?.to_density(), coherent_pair(-a, -a, c)?.to_density());
    let m = (plus.matrix() + minus.matrix()) * C64::new(0.5, 0.0);
    let deficit = 0.5 * (plus.trace_deficit() + minus.trace_deficit());
    out.push((format!("mixture of coherent(+-{a}) pairs"), DensityOperator::new(plus.space().clone(), m, deficit)?.into()));
    out.push(("tmsv(r=0)".to_string(), tmsv_state(0.0, 0)?.into()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoffs_meet_the_tolerance() {
        for r in [0.1, 0.5, 1.0] {
            let c = tmsv_cutoff(r, 1e-12);
            let t2 = r.tanh().powi(2);
            assert!(t2.powi(c as i32 + 1) <= 1e-12);
            assert!(c == 0 || t2.powi(c as i32) > 1e-12);
        }
        assert_eq!(tmsv_cutoff(0.0, 1e-12), 0);
    }

    #[test]
    fn thermal_state_trace() {
        let t = thermal_state(0.5, 1e-12).unwrap();
        assert!((t.trace() + t.trace_deficit() - 1.0).abs() < 1e-14);
        assert!(t.trace_deficit() <= 1e-12);
        let v = thermal_state(0.0, 1e-12).unwrap();
        assert_eq!(v.space().dim(), 1);
    }
}
