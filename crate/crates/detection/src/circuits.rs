//! The two optical circuits as creation maps with outputs ordered by
//! detector index.
//!
//! Homodyne inputs are (s, r, a) with the ancilla a in vacuum; outputs are
//! (D0, D1, D2). Heterodyne inputs are (s, r, a', b', c'); outputs
//! (D0', .., D4').

use std::f64::consts::FRAC_PI_2;

use fock_core::{BsConvention, LinearNetwork};

/// Which implemented detector measures a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Detector {
    /// Phase shifter on the LO set to theta.
    Hom(f64),
    Het,
}

impl Detector {
    pub fn counters(self) -> usize {
        match self {
            Detector::Hom(_) => 3,
            Detector::Het => 5,
        }
    }

    pub fn network(self) -> LinearNetwork {
        match self {
            Detector::Hom(t) => shd_network(t),
            Detector::Het => shed_network(),
        }
    }

    /// The counter that only ever sees LO light.
    pub fn lo_only_counter(self) -> usize {
        0
    }
}

/// a_s -> (b1 - b2)/sqrt2 and a_r -> e^{i theta} (b0/sqrt2 + b1/2 + b2/2).
pub fn shd_network(theta: f64) -> LinearNetwork {
    LinearNetwork::identity(3)
        .phase(1, theta)
        .beamsplitter(1, 2, BsConvention::SignFlipSecond)
        .beamsplitter(0, 1, BsConvention::SignFlipFirst)
        .reorder_outputs(&[2, 0, 1])
}

/// a_s -> (b1 - b2 + b3 - b4)/2 and
/// a_r -> b0/sqrt2 + (b1 + b2 + i b3 + i b4)/(2 sqrt2).
pub fn shed_network() -> LinearNetwork {
    LinearNetwork::identity(5)
        .beamsplitter(1, 2, BsConvention::SignFlipSecond)
        .beamsplitter(0, 4, BsConvention::Symmetric)
        .beamsplitter(1, 3, BsConvention::Symmetric)
        .phase(3, FRAC_PI_2)
        .beamsplitter(0, 1, BsConvention::SignFlipFirst)
        .beamsplitter(4, 3, BsConvention::SignFlipFirst)
        .reorder_outputs(&[2, 0, 1, 4, 3])
}
