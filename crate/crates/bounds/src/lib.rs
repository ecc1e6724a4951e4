//! Deviation inequalities between the squashed (ideal) detectors and the
//! implemented circuits, evaluated on concrete states.
//!
//! Every comparison uses deviation = ideal - implemented and checks it
//! against `[-c_lo * w, c_hi * w]`, where `w` is the observable weight
//! (`<d_hom>`, `<d_het>`, a joint d, or a hybrid weight).

mod check;
pub mod suites;

use serde::Serialize;

pub use check::{
    check_theorem1, check_theorem2, check_theorem3_6, check_theorem4, ideal_pair_state, pair_scale, PairIdeal,
};

pub const TOLERANCE: f64 = 1e-9;
/// Above this truncation deficit no verdict other than indeterminate is given.
pub const DEFICIT_LIMIT: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum BoundsError {
    #[error(transparent)]
    Detection(#[from] detection::DetectionError),
    #[error(transparent)]
    Fock(#[from] fock_core::FockError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Inequality {
    /// first moment, homodyne
    Lh1,
    /// second moment, homodyne (two-sided)
    Lh2,
    /// symmetrized cross term from the pi/4 and 3pi/4 settings
    Lh2m,
    Le1,
    Le2,
    Le2m,
    LhLh,
    LeLe,
    LhLe,
    GhLh,
    GhLe,
    GeLe,
    GeLh,
}

impl Inequality {
    pub const ALL: [Inequality; 13] = [
        Inequality::Lh1,
        Inequality::Lh2,
        Inequality::Lh2m,
        Inequality::Le1,
        Inequality::Le2,
        Inequality::Le2m,
        Inequality::LhLh,
        Inequality::LeLe,
        Inequality::LhLe,
        Inequality::GhLh,
        Inequality::GhLe,
        Inequality::GeLe,
        Inequality::GeLh,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Inequality::Lh1 => "LH_1",
            Inequality::Lh2 => "LH_2",
            Inequality::Lh2m => "LH_2_m",
            Inequality::Le1 => "LE_1",
            Inequality::Le2 => "LE_2",
            Inequality::Le2m => "LE_2_m",
            Inequality::LhLh => "LH_LH",
            Inequality::LeLe => "LE_LE",
            Inequality::LhLe => "LH_LE",
            Inequality::GhLh => "GH_LH",
            Inequality::GhLe => "GH_LE",
            Inequality::GeLe => "GE_LE",
            Inequality::GeLh => "GE_LH",
        }
    }

    fn index(self) -> usize {
        Self::ALL.iter().position(|&i| i == self).expect("listed")
    }
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// (lower, upper) multipliers of the weight for each inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    table: [(f64, f64); 13],
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self::stated()
    }
}

impl BoundConstants {
    /// The constants as stated with the theorems (proof constants rounded up).
    pub fn stated() -> Self {
        let s = |c: f64| (c, c);
        Self {
            table: [
                s(0.525),
                (0.162, 1.085),
                s(0.622),
                s(0.226),
                (0.084, 1.0),
                s(0.5),
                s(0.605),
                s(0.160),
                s(0.371),
                s(0.605),
                s(0.261),
                s(0.160),
                s(0.371),
            ],
        }
    }

    pub fn get(&self, ineq: Inequality) -> (f64, f64) {
        self.table[ineq.index()]
    }

    pub fn with(mut self, ineq: Inequality, lower: f64, upper: f64) -> Self {
        self.table[ineq.index()] = (lower, upper);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentComparison {
    pub inequality: Inequality,
    pub ideal: f64,
    pub implemented: f64,
    /// ideal - implemented
    pub deviation: f64,
    /// the observable the bound is proportional to
    pub weight: f64,
    /// allowed range of the deviation
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// min(upper - deviation, deviation - lower)
    pub slack: f64,
    pub truncation_deficit: f64,
    /// deficit * (1 + largest photon number in the window), a crude size for
    /// what the neglected mass could move
    pub error_bound: f64,
    pub verdict: Verdict,
}

impl MomentComparison {
    pub fn new(
        inequality: Inequality,
        ideal: f64,
        implemented: f64,
        weight: f64,
        deficit: f64,
        scale: f64,
        consts: &BoundConstants,
    ) -> Self {
        let (lo, hi) = consts.get(inequality);
        let deviation = ideal - implemented;
        let (lower_bound, upper_bound) = (-lo * weight, hi * weight);
        let slack = (upper_bound - deviation).min(deviation - lower_bound);
        let error_bound = deficit * (1.0 + scale);
        let verdict = if !slack.is_finite() || deficit > DEFICIT_LIMIT {
            Verdict::Indeterminate
        } else if slack >= error_bound - TOLERANCE {
            Verdict::Satisfied
        } else if slack < -(error_bound + TOLERANCE) {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        };
        Self {
            inequality,
            ideal,
            implemented,
            deviation,
            weight,
            lower_bound,
            upper_bound,
            slack,
            truncation_deficit: deficit,
            error_bound,
            verdict,
        }
    }

    pub fn satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifiedInterval {
    pub inequality: Inequality,
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
}

impl CertifiedInterval {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower - tol && x <= self.upper + tol
    }

    pub fn halfwidths(&self) -> (f64, f64) {
        (self.center - self.lower, self.upper - self.center)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// The interval the ideal moment must lie in, given the implemented moment
/// `center` and the weight `<d>` from the same state.
pub fn certified_interval(center: f64, weight: f64, ineq: Inequality, consts: &BoundConstants) -> CertifiedInterval {
    let (lo, hi) = consts.get(ineq);
    CertifiedInterval { inequality: ineq, center, lower: center - lo * weight, upper: center + hi * weight }
}
