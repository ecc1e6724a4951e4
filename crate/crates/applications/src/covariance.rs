//! Interval-valued moments of squashed modes from implemented homodyne data.
//!
//! Per pair the four phase settings {0, pi/4, pi/2, 3pi/4} give
//! <x> = <z(0)>, <p> = <z(pi/2)>, <x^2> = <z(0)^2>, <p^2> = <z(pi/2)^2> and
//! <(xp+px)/2> = (<z(pi/4)^2> - <z(3pi/4)^2>)/2, each widened by its
//! constant times <d_hom>. Cross-pair products <q_k q_l> use the pair
//! correction d^{(k,l)}.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use bounds::{certified_interval, pair_scale, BoundConstants, CertifiedInterval, Inequality};
use detection::{hom_moments, Backend, Detector, HomReport, MultiInput, PairCorrelation, PairInput, HOM_SETTINGS};
use detection::{f_hom_over_n1, g_hom_counts, z_counts};
use fock_core::special::default_cutoff;
use fock_core::{Exec, Operator, C64};

use crate::interval::Interval;
use crate::{invalid, Result};

const ANGLE_EPS: f64 = 1e-12;
/// Quadrature angles of x and p.
pub const QUADRATURES: [f64; 2] = [0.0, FRAC_PI_2];

/// Implemented-side data of one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairData {
    pub label: String,
    pub hom: HomReport,
    /// Largest photon total the evaluation may have represented.
    pub scale: f64,
}

/// <z_k(theta_k) z_l(theta_l)> with its correction weight.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossData {
    pub k: usize,
    pub l: usize,
    pub theta_k: f64,
    pub theta_l: f64,
    pub corr: PairCorrelation,
    pub scale: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DetectorData {
    pub pairs: Vec<PairData>,
    pub cross: Vec<CrossData>,
}

/// One certified moment: the implemented value, the interval the squashed
/// value lies in, and the truncation deficit behind it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentInterval {
    pub inequality: Inequality,
    pub center: f64,
    pub weight: f64,
    pub bounds: Interval,
    pub deficit: f64,
}

impl MomentInterval {
    fn new(c: CertifiedInterval, weight: f64, deficit: f64, scale: f64) -> Self {
        // the neglected mass can move the center by at most this much
        let slack = deficit * (1.0 + scale);
        Self {
            inequality: c.inequality,
            center: c.center,
            weight,
            bounds: Interval::new(c.lower, c.upper).widen(slack),
            deficit,
        }
    }

    /// Replace the interval, keeping the bookkeeping. Used when deriving
    /// looser boxes for monotonicity checks.
    pub fn with_bounds(mut self, bounds: Interval) -> Self {
        self.bounds = bounds;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeMoments {
    pub label: String,
    pub x: MomentInterval,
    pub p: MomentInterval,
    pub x2: MomentInterval,
    pub p2: MomentInterval,
    /// <(xp + px)/2>
    pub xp: MomentInterval,
}

/// `entries[a][b]` = <q_a^(k) q_b^(l)> with q_0 = x, q_1 = p.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossBlock {
    pub k: usize,
    pub l: usize,
    pub entries: [[MomentInterval; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceInterval {
    pub modes: Vec<ModeMoments>,
    pub cross: Vec<CrossBlock>,
}

impl CovarianceInterval {
    pub fn cross_block(&self, k: usize, l: usize) -> Option<&CrossBlock> {
        self.cross.iter().find(|b| b.k == k && b.l == l)
    }

    /// Every stored moment interval.
    pub fn entries(&self) -> Vec<&MomentInterval> {
        let mut out = Vec::new();
        for m in &self.modes {
            out.extend([&m.x, &m.p, &m.x2, &m.p2, &m.xp]);
        }
        for b in &self.cross {
            out.extend(b.entries.iter().flatten());
        }
        out
    }

    pub fn entries_mut(&mut self) -> Vec<&mut MomentInterval> {
        let mut out = Vec::new();
        for m in &mut self.modes {
            out.extend([&mut m.x, &mut m.p, &mut m.x2, &mut m.p2, &mut m.xp]);
        }
        for b in &mut self.cross {
            out.extend(b.entries.iter_mut().flatten());
        }
        out
    }

    pub fn max_deficit(&self) -> f64 {
        self.entries().iter().map(|e| e.deficit).fold(0.0, f64::max)
    }

    /// Centered covariance matrix over (x_1, p_1, x_2, p_2, ...) with
    /// symmetrized products, as an interval matrix. Each entry is a sound
    /// enclosure; the entries are not jointly attainable in general.
    pub fn centered(&self) -> Result<Vec<Vec<Interval>>> {
        let n = self.modes.len();
        let mut out = vec![vec![Interval::point(0.0); 2 * n]; 2 * n];
        let mean = |m: &ModeMoments, a: usize| if a == 0 { m.x.bounds } else { m.p.bounds };
        for (k, m) in self.modes.iter().enumerate() {
            let (x, p) = (m.x.bounds, m.p.bounds);
            out[2 * k][2 * k] = m.x2.bounds.sub(x.square());
            out[2 * k + 1][2 * k + 1] = m.p2.bounds.sub(p.square());
            let c = m.xp.bounds.sub(x.mul(p));
            out[2 * k][2 * k + 1] = c;
            out[2 * k + 1][2 * k] = c;
        }
        for k in 0..n {
            for l in k + 1..n {
                let b = self
                    .cross_block(k, l)
                    .ok_or_else(|| crate::ApplicationsError::InvalidInput(format!("no cross block for ({k}, {l})")))?;
                for a in 0..2 {
                    for c in 0..2 {
                        let v = b.entries[a][c].bounds.sub(mean(&self.modes[k], a).mul(mean(&self.modes[l], c)));
                        out[2 * k + a][2 * l + c] = v;
                        out[2 * l + c][2 * k + a] = v;
                    }
                }
            }
        }
        Ok(out)
    }
}

fn setting(h: &HomReport, theta: f64, label: &str) -> Result<(f64, f64)> {
    match h.at(theta) {
        Some(v) => Ok(v),
        None => invalid(format!("{label}: missing homodyne setting theta = {theta}")),
    }
}

fn cross_at<'a>(data: &'a DetectorData, k: usize, l: usize, tk: f64, tl: f64) -> Result<&'a CrossData> {
    data.cross
        .iter()
        .find(|c| c.k == k && c.l == l && (c.theta_k - tk).abs() < ANGLE_EPS && (c.theta_l - tl).abs() < ANGLE_EPS)
        .map_or_else(|| invalid(format!("missing cross term ({k}, {l}) at angles ({tk}, {tl})")), Ok)
}

pub fn estimate_covariance(data: &DetectorData, consts: &BoundConstants) -> Result<CovarianceInterval> {
    if data.pairs.is_empty() {
        return invalid("no pairs");
    }
    let mut modes = Vec::with_capacity(data.pairs.len());
    for pd in &data.pairs {
        let h = &pd.hom;
        if !h.d_hom.is_finite() || h.d_hom < 0.0 {
            return invalid(format!("{}: <d_hom> = {} is not a valid weight", pd.label, h.d_hom));
        }
        let (z0, z02) = setting(h, 0.0, &pd.label)?;
        let (z1, z12) = setting(h, FRAC_PI_2, &pd.label)?;
        let (_, za) = setting(h, FRAC_PI_4, &pd.label)?;
        let (_, zb) = setting(h, 3.0 * FRAC_PI_4, &pd.label)?;
        let mi = |center, ineq| MomentInterval::new(certified_interval(center, h.d_hom, ineq, consts), h.d_hom, h.deficit, pd.scale);
        modes.push(ModeMoments {
            label: pd.label.clone(),
            x: mi(z0, Inequality::Lh1),
            p: mi(z1, Inequality::Lh1),
            x2: mi(z02, Inequality::Lh2),
            p2: mi(z12, Inequality::Lh2),
            xp: mi(0.5 * (za - zb), Inequality::Lh2m),
        });
    }
    let n = modes.len();
    let mut cross = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            let entry = |a: usize, b: usize| -> Result<MomentInterval> {
                let c = cross_at(data, k, l, QUADRATURES[a], QUADRATURES[b])?;
                let ci = certified_interval(c.corr.correlation, c.corr.d, Inequality::LhLh, consts);
                Ok(MomentInterval::new(ci, c.corr.d, c.corr.deficit, c.scale))
            };
            let entries = [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]];
            cross.push(CrossBlock { k, l, entries });
        }
    }
    Ok(CovarianceInterval { modes, cross })
}

struct PairOps {
    z: [Option<Operator>; 2],
    f_bar: Operator,
    g_bar: Operator,
    report: HomReport,
}

fn pair_ops(input: &MultiInput, p: usize, exec: Exec) -> Result<PairOps> {
    let z2 = |c: &[u32]| z_counts(c).powi(2);
    let one = |_: &[u32]| 1.0;
    let modes = input.pair_modes(p);
    let quarter = C64::new(0.25, 0.0);
    let mut z = [None, None];
    let mut z_mean = Vec::new();
    let (mut f_bar, mut g_bar): (Option<Operator>, Option<Operator>) = (None, None);
    let (mut d_hom, mut g_mean) = (0.0, 0.0);
    let mut deficit = input.state().deficit();
    for s in HOM_SETTINGS {
        let ops = input.implemented_operators(p, Detector::Hom(s), &[&z_counts, &z2, &f_hom_over_n1, &g_hom_counts, &one], exec)?;
        let ev: Vec<f64> = ops.iter().map(|o| input.expect(&[(&modes, o)])).collect::<std::result::Result<_, _>>()?;
        z_mean.push((s, ev[0], ev[1]));
        d_hom += 0.25 * ev[2];
        g_mean += 0.25 * ev[3];
        deficit = deficit.max(1.0 - ev[4]);
        let (f, g) = (ops[2].scale(quarter), ops[3].scale(quarter));
        f_bar = Some(match f_bar {
            None => f,
            Some(a) => a.add(&f)?,
        });
        g_bar = Some(match g_bar {
            None => g,
            Some(a) => a.add(&g)?,
        });
        for (q, t) in QUADRATURES.iter().enumerate() {
            if (s - t).abs() < ANGLE_EPS {
                z[q] = Some(ops[0].clone());
            }
        }
    }
    let report = HomReport { settings: z_mean, d_hom, g_bar: g_mean, deficit: deficit.max(0.0) };
    Ok(PairOps { z, f_bar: f_bar.expect("four settings"), g_bar: g_bar.expect("four settings"), report })
}

fn scale_of(input: &MultiInput) -> f64 {
    let base = input.state().space().max_total();
    let lo: u32 = match input {
        MultiInput::Joint { .. } => 0,
        MultiInput::CoherentLo { pairs, .. } => pairs.iter().map(|p| default_cutoff(p.1.norm_sqr())).sum(),
    };
    (base + lo) as f64
}

/// Evaluate every implemented-side expectation `estimate_covariance` needs:
/// four homodyne settings per pair and the x/p cross products of each pair
/// of pairs. Labels default to "mode k".
pub fn measure(input: &MultiInput, labels: Option<&[String]>, backend: Backend, exec: Exec) -> Result<DetectorData> {
    let resolved = match (input, backend) {
        (MultiInput::CoherentLo { .. }, Backend::CoherentLo) | (MultiInput::Joint { .. }, Backend::ExactFock) => input.clone(),
        (MultiInput::CoherentLo { .. }, Backend::ExactFock) => input.to_joint()?,
        _ => return invalid(format!("backend {backend:?} cannot evaluate this multi-pair input")),
    };
    let n = resolved.pair_count();
    if let Some(l) = labels {
        if l.len() != n {
            return invalid(format!("{} labels for {n} pairs", l.len()));
        }
    }
    let state_modes = resolved.state().space().mode_count();
    for p in 0..n {
        if resolved.pair_modes(p).iter().any(|&m| m >= state_modes) {
            return invalid(format!("pair {p} names a mode out of range"));
        }
    }
    let scale = scale_of(input);
    let ops = exec.map_range(0..n, |p| pair_ops(&resolved, p, exec));
    let ops: Vec<PairOps> = ops.into_iter().collect::<Result<_>>()?;
    let pairs = ops
        .iter()
        .enumerate()
        .map(|(p, o)| PairData {
            label: labels.map_or_else(|| format!("mode {p}"), |l| l[p].clone()),
            hom: o.report.clone(),
            scale,
        })
        .collect();
    let mut cross = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            let (mk, ml) = (resolved.pair_modes(k), resolved.pair_modes(l));
            let (ok, ol) = (&ops[k], &ops[l]);
            let d = resolved.expect(&[(&mk, &ok.f_bar), (&ml, &ol.g_bar)])? + resolved.expect(&[(&mk, &ok.g_bar), (&ml, &ol.f_bar)])?;
            let deficit = ok.report.deficit.max(ol.report.deficit);
            for (a, &tk) in QUADRATURES.iter().enumerate() {
                for (b, &tl) in QUADRATURES.iter().enumerate() {
                    let zk = ok.z[a].as_ref().expect("quadrature settings are in the grid");
                    let zl = ol.z[b].as_ref().expect("quadrature settings are in the grid");
                    let correlation = resolved.expect(&[(&mk, zk), (&ml, zl)])?;
                    cross.push(CrossData { k, l, theta_k: tk, theta_l: tl, corr: PairCorrelation { correlation, d, deficit }, scale });
                }
            }
        }
    }
    Ok(DetectorData { pairs, cross })
}

/// Single-pair data from any backend, including the Poisson one.
pub fn measure_pair(input: &PairInput, label: &str, backend: Backend, exec: Exec) -> Result<PairData> {
    let hom = hom_moments(input, &HOM_SETTINGS, backend, exec)?;
    Ok(PairData { label: label.to_string(), hom, scale: pair_scale(input) })
}
