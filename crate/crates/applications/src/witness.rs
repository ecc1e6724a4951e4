//! Duan-type sum criterion on an interval covariance matrix.
//!
//! With [x, p] = i/2 every separable two-mode state has
//! Var(x1 - x2) + Var(p1 + p2) >= 1. In raw moments the sum is
//!
//! S = <x1^2> + <x2^2> + <p1^2> + <p2^2> - 2<x1 x2> + 2<p1 p2>
//!     - (<x1> - <x2>)^2 - (<p1> + <p2>)^2,
//!
//! where every entry occurs once. Its maximum over the box is therefore
//! attained entry by entry: upper ends of the second moments, the lower end
//! of <x1 x2>, the upper end of <p1 p2>, and the smallest attainable squares
//! of the two mean combinations.

use serde::Serialize;

use crate::covariance::CovarianceInterval;
use crate::interval::Interval;
use crate::{invalid, Result};

/// Certification needs the worst case below 1 by at least this much.
pub const WITNESS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Criterion {
    DuanSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessVerdict {
    EntangledCertified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessResult {
    pub criterion: Criterion,
    pub verdict: WitnessVerdict,
    /// 1 - worst_case; positive exactly when certified (up to the tolerance).
    pub margin: f64,
    pub worst_case: f64,
    pub deficit: f64,
}

impl WitnessResult {
    pub fn certified(&self) -> bool {
        self.verdict == WitnessVerdict::EntangledCertified
    }
}

pub fn duan_witness(cm: &CovarianceInterval) -> Result<WitnessResult> {
    if cm.modes.len() != 2 {
        return invalid(format!("the sum criterion needs two modes, got {}", cm.modes.len()));
    }
    let Some(block) = cm.cross_block(0, 1) else {
        return invalid("missing the (0, 1) cross block");
    };
    let deficit = cm.max_deficit();
    if !cm.entries().iter().all(|e| e.bounds.is_proper()) {
        return Ok(WitnessResult {
            criterion: Criterion::DuanSum,
            verdict: WitnessVerdict::Inconclusive,
            margin: f64::NEG_INFINITY,
            worst_case: f64::INFINITY,
            deficit,
        });
    }
    let (a, b) = (&cm.modes[0], &cm.modes[1]);
    let xx: Interval = block.entries[0][0].bounds;
    let pp: Interval = block.entries[1][1].bounds;
    let worst = a.x2.bounds.hi + b.x2.bounds.hi + a.p2.bounds.hi + b.p2.bounds.hi - 2.0 * xx.lo + 2.0 * pp.hi
        - a.x.bounds.sub(b.x.bounds).square().lo
        - a.p.bounds.add(b.p.bounds).square().lo;
    let verdict = if worst < 1.0 - WITNESS_TOLERANCE {
        WitnessVerdict::EntangledCertified
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(WitnessResult { criterion: Criterion::DuanSum, verdict, margin: 1.0 - worst, worst_case: worst, deficit })
}
