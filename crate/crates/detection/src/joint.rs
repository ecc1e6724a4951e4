//! Several pairs (and optionally ideally measured modes) in one joint state.
//!
//! Every joint statistic is an expectation of a tensor product of local
//! operators: O_h = sum_c h(c) Pi_c for each pair, and plain moment
//! operators for ideal modes.

use fock_core::operator::{number_operator, quadrature_operator, quadrature_squared};
use fock_core::special::default_cutoff;
use fock_core::state::coherent_state;
use fock_core::{expect_product, Exec, Operator, State, C64};

use crate::circuits::Detector;
use crate::coherent::povm_compile_coherent_lo;
use crate::exact::exact_effective_operators;
use crate::input::Backend;
use crate::stats::*;
use crate::DetectionError;

#[derive(Clone, Debug)]
pub enum MultiInput {
    /// Full state; each pair names its (signal, LO) modes.
    Joint { state: State, pairs: Vec<[usize; 2]> },
    /// State over signal (and ideal) modes; each pair names its signal mode
    /// and the amplitude of its pure coherent LO.
    CoherentLo { signals: State, pairs: Vec<(usize, C64)> },
}

impl MultiInput {
    pub fn state(&self) -> &State {
        match self {
            MultiInput::Joint { state, .. } => state,
            MultiInput::CoherentLo { signals, .. } => signals,
        }
    }

    pub fn pair_count(&self) -> usize {
        match self {
            MultiInput::Joint { pairs, .. } => pairs.len(),
            MultiInput::CoherentLo { pairs, .. } => pairs.len(),
        }
    }

    /// Modes of the state the pair's local operators act on.
    pub fn pair_modes(&self, p: usize) -> Vec<usize> {
        match self {
            MultiInput::Joint { pairs, .. } => pairs[p].to_vec(),
            MultiInput::CoherentLo { pairs, .. } => vec![pairs[p].0],
        }
    }

    /// Append truncated coherent LO modes so every pair is explicit.
    pub fn to_joint(&self) -> Result<MultiInput, DetectionError> {
        match self {
            MultiInput::Joint { .. } => Ok(self.clone()),
            MultiInput::CoherentLo { signals, pairs } => {
                let mut state = signals.clone();
                let mut out = Vec::new();
                for &(s, beta) in pairs {
                    let lo: State = coherent_state(beta, default_cutoff(beta.norm_sqr()))?.into();
                    out.push([s, state.space().mode_count()]);
                    state = state.tensor(&lo);
                }
                Ok(MultiInput::Joint { state, pairs: out })
            }
        }
    }

    fn check(&self, backend: Backend) -> Result<(), DetectionError> {
        let n = self.state().space().mode_count();
        for p in 0..self.pair_count() {
            if self.pair_modes(p).iter().any(|&m| m >= n) {
                return Err(DetectionError::InvalidInput(format!("pair {p} names a mode out of range")));
            }
        }
        match (self, backend) {
            (MultiInput::Joint { .. }, Backend::ExactFock) | (MultiInput::CoherentLo { .. }, Backend::CoherentLo) => Ok(()),
            (MultiInput::CoherentLo { .. }, Backend::ExactFock) => Ok(()),
            _ => Err(DetectionError::InvalidInput("backend does not accept this multi-pair input".into())),
        }
    }

    fn max_occupation(&self, mode: usize) -> u32 {
        self.state().space().basis().iter().map(|o| o[mode]).max().unwrap_or(0)
    }

    /// Implemented-side operators for pair `p` (works on the state as given).
    pub fn implemented_operators(
        &self,
        p: usize,
        det: Detector,
        hs: &[&(dyn Fn(&[u32]) -> f64 + Sync)],
        exec: Exec,
    ) -> Result<Vec<Operator>, DetectionError> {
        match self {
            MultiInput::Joint { state, pairs } => {
                let local = state.space().marginal(&pairs[p])?;
                exact_effective_operators(&local, det, hs)
            }
            MultiInput::CoherentLo { pairs, .. } => {
                let (s, beta) = pairs[p];
                let povm = povm_compile_coherent_lo(beta, det, self.max_occupation(s), None)?;
                Ok(povm.effective_operators(hs, exec))
            }
        }
    }

    /// Lambda^dag(X) on the pair (joint input) or its LO-dressed signal form.
    pub fn ideal_operator(&self, p: usize, x: impl Fn(u32) -> Operator) -> Result<Operator, DetectionError> {
        match self {
            MultiInput::Joint { state, pairs } => {
                let local = state.space().marginal(&pairs[p])?;
                let xs = x(local.cutoffs()[0].max(self.max_occupation(pairs[p][0])));
                Ok(squash::squash_adjoint(&xs, &local)?)
            }
            MultiInput::CoherentLo { pairs, .. } => {
                let (s, beta) = pairs[p];
                Ok(squash::lo_dressed_operator(&x(self.max_occupation(s)), beta)?)
            }
        }
    }

    /// Single-mode operator sized for an ideally measured mode.
    pub fn mode_operator(&self, mode: usize, x: impl Fn(u32) -> Operator) -> Operator {
        x(self.max_occupation(mode))
    }

    pub fn expect(&self, factors: &[(&[usize], &Operator)]) -> Result<f64, DetectionError> {
        Ok(expect_product(self.state(), factors)?.re)
    }
}

/// How an implemented pair is read out in a correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairReadout {
    /// z(theta) from the homodyne circuit.
    Hom(f64),
    /// alpha_theta from the heterodyne circuit.
    Het(f64),
}

/// Local operators of one pair: the readout O_o, and the F and G parts of
/// the correction (F-bar, G-bar for homodyne; f_het/(N+1), g_het for heterodyne).
pub struct PairOperators {
    pub readout: Operator,
    pub f: Operator,
    pub g: Operator,
}

pub fn pair_operators(input: &MultiInput, p: usize, r: PairReadout, exec: Exec) -> Result<PairOperators, DetectionError> {
    match r {
        PairReadout::Hom(theta) => {
            let mut f_acc: Option<Operator> = None;
            let mut g_acc: Option<Operator> = None;
            let mut readout = None;
            for s in HOM_SETTINGS {
                let ops = input.implemented_operators(p, Detector::Hom(s), &[&f_hom_over_n1, &g_hom_counts, &z_counts], exec)?;
                let quarter = C64::new(0.25, 0.0);
                let (f, g) = (ops[0].scale(quarter), ops[1].scale(quarter));
                f_acc = Some(match f_acc {
                    None => f,
                    Some(a) => a.add(&f)?,
                });
                g_acc = Some(match g_acc {
                    None => g,
                    Some(a) => a.add(&g)?,
                });
                if (s - theta).abs() < 1e-12 {
                    readout = Some(ops[2].clone());
                }
            }
            let readout = match readout {
                Some(r) => r,
                None => input.implemented_operators(p, Detector::Hom(theta), &[&z_counts], exec)?.remove(0),
            };
            Ok(PairOperators { readout, f: f_acc.expect("four settings"), g: g_acc.expect("four settings") })
        }
        PairReadout::Het(theta) => {
            let a = move |c: &[u32]| alpha_theta(&CountsHet::from_slice(c), theta);
            let mut ops = input.implemented_operators(p, Detector::Het, &[&a, &d_het_counts, &g_het_counts], exec)?;
            let g = ops.pop().expect("three");
            let f = ops.pop().expect("three");
            let readout = ops.pop().expect("three");
            Ok(PairOperators { readout, f, g })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCorrelation {
    /// <o_k o_l> on the implemented side.
    pub correlation: f64,
    /// <d^{(k,l)}> for the readout kinds.
    pub d: f64,
    pub deficit: f64,
}

fn resolve(input: &MultiInput, backend: Backend) -> Result<MultiInput, DetectionError> {
    input.check(backend)?;
    match (input, backend) {
        (MultiInput::CoherentLo { .. }, Backend::ExactFock) => input.to_joint(),
        _ => Ok(input.clone()),
    }
}

pub fn pair_statistics(
    input: &MultiInput,
    k: usize,
    rk: PairReadout,
    l: usize,
    rl: PairReadout,
    backend: Backend,
    exec: Exec,
) -> Result<PairCorrelation, DetectionError> {
    if k == l || k >= input.pair_count() || l >= input.pair_count() {
        return Err(DetectionError::InvalidInput("need two distinct pairs in range".into()));
    }
    let input = resolve(input, backend)?;
    let ok = pair_operators(&input, k, rk, exec)?;
    let ol = pair_operators(&input, l, rl, exec)?;
    let (mk, ml) = (input.pair_modes(k), input.pair_modes(l));
    let e = |a: &Operator, b: &Operator| input.expect(&[(&mk, a), (&ml, b)]);
    Ok(PairCorrelation {
        correlation: e(&ok.readout, &ol.readout)?,
        d: e(&ok.f, &ol.g)? + e(&ok.g, &ol.f)?,
        deficit: input.state().deficit(),
    })
}

/// How the ideally measured mode is read out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IdealReadout {
    /// x(phi) from ideal homodyne detection.
    Hom(f64),
    /// gamma_phi from ideal heterodyne detection.
    Het(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridCorrelation {
    /// <x(phi) o> or <gamma_phi o>.
    pub correlation: f64,
    /// <x(0)^2 d> + <x(pi/2)^2 d> for ideal homodyne, <|gamma|^2 d> for
    /// ideal heterodyne, with d = d_hom or d_het of the pair.
    pub weight: f64,
    pub deficit: f64,
}

pub fn hybrid_statistics(
    input: &MultiInput,
    ideal_mode: usize,
    first: IdealReadout,
    pair: usize,
    second: PairReadout,
    backend: Backend,
    exec: Exec,
) -> Result<HybridCorrelation, DetectionError> {
    if pair >= input.pair_count() {
        return Err(DetectionError::InvalidInput("pair index out of range".into()));
    }
    let input = resolve(input, backend)?;
    if input.pair_modes(pair).contains(&ideal_mode) || ideal_mode >= input.state().space().mode_count() {
        return Err(DetectionError::InvalidInput("the ideal mode must be outside the pair".into()));
    }
    let po = pair_operators(&input, pair, second, exec)?;
    let pm = input.pair_modes(pair);
    let im = [ideal_mode];
    let phi = match first {
        IdealReadout::Hom(p) | IdealReadout::Het(p) => p,
    };
    // F(gamma_phi) = x(phi), so both ideal readouts use the quadrature.
    let x = input.mode_operator(ideal_mode, |c| quadrature_operator(phi, c));
    let correlation = input.expect(&[(&im, &x), (&pm, &po.readout)])?;
    let weight = match first {
        IdealReadout::Hom(_) => {
            let x0 = input.mode_operator(ideal_mode, |c| quadrature_squared(0.0, c));
            let x1 = input.mode_operator(ideal_mode, |c| quadrature_squared(std::f64::consts::FRAC_PI_2, c));
            input.expect(&[(&im, &x0), (&pm, &po.f)])? + input.expect(&[(&im, &x1), (&pm, &po.f)])?
        }
        IdealReadout::Het(_) => {
            // F(|gamma|^2) = n + 1
            let n1 = input.mode_operator(ideal_mode, |c| {
                let n = number_operator(c);
                n.add(&Operator::identity(n.space().clone())).expect("same space")
            });
            input.expect(&[(&im, &n1), (&pm, &po.f)])?
        }
    };
    Ok(HybridCorrelation { correlation, weight, deficit: input.state().deficit() })
}
