//! Single-pair inputs, backends and the distribution/moment entry points.

use fock_core::special::default_cutoff;
use fock_core::state::coherent_state;
use fock_core::{expect_product, Exec, Operator, State, C64};

use crate::circuits::Detector;
use crate::coherent::povm_compile_coherent_lo;
use crate::dist::OutcomeDistribution;
use crate::exact::{exact_distribution, exact_effective_operators};
use crate::poisson::PoissonProduct;
use crate::stats::*;
use crate::DetectionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Full Fock-space circuit evaluation.
    ExactFock,
    /// Arbitrary signal with a pure coherent LO, via a signal-mode POVM.
    CoherentLo,
    /// Coherent signal and coherent LO; independent Poisson counters.
    PoissonProduct,
}

/// A (signal, LO) pair state in one of the forms the backends accept.
#[derive(Clone, Debug)]
pub enum PairInput {
    /// Any two-mode state, modes ordered (signal, LO).
    Joint(State),
    SignalWithCoherentLo { signal: State, beta: C64 },
    CoherentProduct { alpha: C64, beta: C64 },
}

fn invalid<T>(msg: &str) -> Result<T, DetectionError> {
    Err(DetectionError::InvalidInput(msg.into()))
}

impl PairInput {
    /// Two-mode state with coherent parts truncated at the default cutoff.
    pub fn joint_state(&self) -> Result<State, DetectionError> {
        Ok(match self {
            PairInput::Joint(s) => {
                if s.space().mode_count() != 2 {
                    return invalid("joint pair state must have two modes");
                }
                s.clone()
            }
            PairInput::SignalWithCoherentLo { signal, beta } => {
                let lo: State = coherent_state(*beta, default_cutoff(beta.norm_sqr()))?.into();
                signal.tensor(&lo)
            }
            PairInput::CoherentProduct { alpha, beta } => {
                let s = coherent_state(*alpha, default_cutoff(alpha.norm_sqr()))?;
                let lo = coherent_state(*beta, default_cutoff(beta.norm_sqr()))?;
                State::Pure(s.tensor(&lo))
            }
        })
    }

    pub fn signal_and_beta(&self) -> Result<(State, C64), DetectionError> {
        match self {
            PairInput::Joint(_) => invalid("the coherent-LO backend needs a pure coherent LO"),
            PairInput::SignalWithCoherentLo { signal, beta } => {
                if signal.space().mode_count() != 1 {
                    return invalid("signal must be one mode");
                }
                Ok((signal.clone(), *beta))
            }
            PairInput::CoherentProduct { alpha, beta } => {
                Ok((coherent_state(*alpha, default_cutoff(alpha.norm_sqr()))?.into(), *beta))
            }
        }
    }

    pub fn coherent_amplitudes(&self) -> Result<(C64, C64), DetectionError> {
        match self {
            PairInput::CoherentProduct { alpha, beta } => Ok((*alpha, *beta)),
            _ => invalid("the Poisson backend needs a coherent signal and a coherent LO"),
        }
    }
}

fn signal_cutoff(signal: &State) -> u32 {
    signal.space().basis().iter().map(|o| o[0]).max().unwrap_or(0)
}

pub fn distribution(
    input: &PairInput,
    det: Detector,
    backend: Backend,
    count_limits: Option<&[u32]>,
) -> Result<OutcomeDistribution, DetectionError> {
    if let Some(l) = count_limits {
        if l.len() != det.counters() {
            return invalid("one count limit per detector is required");
        }
    }
    let dist = match backend {
        Backend::ExactFock => exact_distribution(&input.joint_state()?, det)?,
        Backend::CoherentLo => {
            let (signal, beta) = input.signal_and_beta()?;
            povm_compile_coherent_lo(beta, det, signal_cutoff(&signal), count_limits)?.distribution(&signal)?
        }
        Backend::PoissonProduct => {
            let (a, b) = input.coherent_amplitudes()?;
            PoissonProduct::new(a, b, det)?.distribution()?
        }
    };
    Ok(match count_limits {
        Some(l) => restrict(dist, l)?,
        None => dist,
    })
}

fn restrict(d: OutcomeDistribution, limits: &[u32]) -> Result<OutcomeDistribution, DetectionError> {
    let mut counts = Vec::new();
    let mut probs = Vec::new();
    let mut cut = 0.0;
    for (c, p) in d.iter() {
        if c.iter().zip(limits).all(|(a, b)| a <= b) {
            counts.extend_from_slice(c);
            probs.push(p);
        } else {
            cut += p;
        }
    }
    OutcomeDistribution::new(d.detector(), counts, probs, d.mass_deficit() + cut)
}

pub fn shd_distribution(
    input: &PairInput,
    theta: f64,
    backend: Backend,
    count_limits: Option<&[u32]>,
) -> Result<OutcomeDistribution, DetectionError> {
    distribution(input, Detector::Hom(theta), backend, count_limits)
}

pub fn shed_distribution(
    input: &PairInput,
    backend: Backend,
    count_limits: Option<&[u32]>,
) -> Result<OutcomeDistribution, DetectionError> {
    distribution(input, Detector::Het, backend, count_limits)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Statistic {
    Z,
    Z2,
    /// Needs the four homodyne settings.
    DHom,
    AlphaTheta(f64),
    AlphaTheta2(f64),
    AlphaCross,
    DHet,
}

fn only(dists: &[OutcomeDistribution], want_het: bool) -> Result<&OutcomeDistribution, DetectionError> {
    match dists {
        [d] if matches!(d.detector(), Detector::Het) == want_het => Ok(d),
        _ => invalid("this statistic needs exactly one distribution of the matching detector"),
    }
}

pub fn expected_statistic(dists: &[OutcomeDistribution], stat: Statistic) -> Result<f64, DetectionError> {
    Ok(match stat {
        Statistic::Z => only(dists, false)?.expect(z_counts),
        Statistic::Z2 => only(dists, false)?.expect(|c| z_counts(c).powi(2)),
        Statistic::DHom => {
            let mut total = 0.0;
            for s in HOM_SETTINGS {
                let d = dists
                    .iter()
                    .find(|d| matches!(d.detector(), Detector::Hom(t) if (t - s).abs() < 1e-12))
                    .ok_or_else(|| DetectionError::InvalidInput(format!("missing the setting theta = {s}")))?;
                total += 0.25 * d.expect(f_hom_over_n1);
            }
            total
        }
        Statistic::AlphaTheta(t) => only(dists, true)?.expect(|c| alpha_theta(&CountsHet::from_slice(c), t)),
        Statistic::AlphaTheta2(t) => only(dists, true)?.expect(|c| alpha_theta(&CountsHet::from_slice(c), t).powi(2)),
        Statistic::AlphaCross => only(dists, true)?.expect(|c| {
            let a = alpha_counts(c);
            a.re * a.im
        }),
        Statistic::DHet => only(dists, true)?.expect(d_het_counts),
    })
}

/// Implemented-side homodyne moments of one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct HomReport {
    /// (theta, <z>, <z^2>) for each requested setting.
    pub settings: Vec<(f64, f64, f64)>,
    pub d_hom: f64,
    /// 1/4 sum over the four settings of <g_hom>.
    pub g_bar: f64,
    /// Probability mass not represented.
    pub deficit: f64,
}

impl HomReport {
    pub fn at(&self, theta: f64) -> Option<(f64, f64)> {
        self.settings.iter().find(|s| (s.0 - theta).abs() < 1e-12).map(|s| (s.1, s.2))
    }
}

/// Implemented-side heterodyne moments of one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HetReport {
    pub alpha: C64,
    /// <Re(alpha)^2>, <Im(alpha)^2>, <Re(alpha) Im(alpha)>
    pub re2: f64,
    pub im2: f64,
    pub cross: f64,
    pub d_het: f64,
    pub g_het: f64,
    pub deficit: f64,
}

impl HetReport {
    pub fn alpha_theta(&self, t: f64) -> f64 {
        self.alpha.re * t.cos() + self.alpha.im * t.sin()
    }

    pub fn alpha_theta2(&self, t: f64) -> f64 {
        let (c, s) = (t.cos(), t.sin());
        c * c * self.re2 + 2.0 * c * s * self.cross + s * s * self.im2
    }
}

type H<'a> = &'a (dyn Fn(&[u32]) -> f64 + Sync);

/// Expectations of several count functions for one detector setting.
pub fn expectations(
    input: &PairInput,
    det: Detector,
    backend: Backend,
    hs: &[H<'_>],
    exec: Exec,
) -> Result<(Vec<f64>, f64), DetectionError> {
    match backend {
        Backend::PoissonProduct => {
            let (a, b) = input.coherent_amplitudes()?;
            let pp = PoissonProduct::new(a, b, det)?;
            let (v, mass) = pp.expectations(hs, exec);
            Ok((v, (1.0 - mass).max(0.0)))
        }
        Backend::ExactFock => {
            let st = input.joint_state()?;
            let ops = exact_effective_operators(st.space(), det, hs)?;
            let v = evaluate(&st, &[0, 1], &ops)?;
            Ok((v, st.deficit()))
        }
        Backend::CoherentLo => {
            let (signal, beta) = input.signal_and_beta()?;
            let povm = povm_compile_coherent_lo(beta, det, signal_cutoff(&signal), None)?;
            let ops = povm.effective_operators(hs, exec);
            let v = evaluate(&signal, &[0], &ops)?;
            Ok((v, signal.deficit() + povm.completeness_deficit()))
        }
    }
}

fn evaluate(state: &State, modes: &[usize], ops: &[Operator]) -> Result<Vec<f64>, DetectionError> {
    ops.iter()
        .map(|o| Ok(expect_product(state, &[(modes, o)])?.re))
        .collect()
}

pub fn hom_moments(input: &PairInput, thetas: &[f64], backend: Backend, exec: Exec) -> Result<HomReport, DetectionError> {
    let mut settings = Vec::new();
    let mut d_hom = 0.0;
    let mut g_bar = 0.0;
    let mut deficit: f64 = 0.0;
    let mut all: Vec<f64> = HOM_SETTINGS.to_vec();
    for &t in thetas {
        if !all.iter().any(|s| (s - t).abs() < 1e-12) {
            all.push(t);
        }
    }
    for &t in &all {
        let in_grid = HOM_SETTINGS.iter().any(|s| (s - t).abs() < 1e-12);
        let wanted = thetas.iter().any(|s| (s - t).abs() < 1e-12);
        let (z, z2, f, g, def) = if backend == Backend::PoissonProduct {
            let (a, b) = input.coherent_amplitudes()?;
            let s = PoissonProduct::new(a, b, Detector::Hom(t))?.hom_sums(exec)?;
            (s.z, s.z2, s.f_over_n1, s.g, (1.0 - s.mass).max(0.0))
        } else {
            let z2 = |c: &[u32]| z_counts(c).powi(2);
            let hs: [H<'_>; 4] = [&z_counts, &z2, &f_hom_over_n1, &g_hom_counts];
            let (v, def) = expectations(input, Detector::Hom(t), backend, &hs, exec)?;
            (v[0], v[1], v[2], v[3], def)
        };
        if in_grid {
            d_hom += 0.25 * f;
            g_bar += 0.25 * g;
        }
        if wanted {
            settings.push((t, z, z2));
        }
        deficit = deficit.max(def);
    }
    Ok(HomReport { settings, d_hom, g_bar, deficit })
}

pub fn het_moments(input: &PairInput, backend: Backend, exec: Exec) -> Result<HetReport, DetectionError> {
    let re = |c: &[u32]| alpha_counts(c).re;
    let im = |c: &[u32]| alpha_counts(c).im;
    let re2 = |c: &[u32]| alpha_counts(c).re.powi(2);
    let im2 = |c: &[u32]| alpha_counts(c).im.powi(2);
    let cross = |c: &[u32]| {
        let a = alpha_counts(c);
        a.re * a.im
    };
    let hs: [H<'_>; 7] = [&re, &im, &re2, &im2, &cross, &d_het_counts, &g_het_counts];
    let (v, deficit) = expectations(input, Detector::Het, backend, &hs, exec)?;
    Ok(HetReport {
        alpha: C64::new(v[0], v[1]),
        re2: v[2],
        im2: v[3],
        cross: v[4],
        d_het: v[5],
        g_het: v[6],
        deficit,
    })
}
