//! Seeded count records from one detector, checked against the exact
//! distribution they were drawn from.

use applications::demo::STATE_TOLERANCE;
use applications::thermal_state;
use detection::{alpha_counts, distribution, sample_counts, z_counts, Detector, OutcomeDistribution, PairInput};
use fock_core::special::default_cutoff;
use fock_core::state::{coherent_state, fock_state};
use fock_core::{State, C64};

use crate::config::{DetectorName, SampleConfig, SignalSpec};
use crate::output::{num, write_csv};
use crate::{CliError, Context, Outcome, Result};

/// Sample means further than this many standard errors from the exact mean
/// count as a failure.
pub const Z_LIMIT: f64 = 5.0;

pub fn signal(spec: &SignalSpec) -> Result<State> {
    let fail = |e: &dyn std::fmt::Display| CliError::backend("sample signal", e);
    Ok(match *spec {
        SignalSpec::Coherent { alpha } => {
            let a = C64::new(alpha, 0.0);
            coherent_state(a, default_cutoff(a.norm_sqr())).map_err(|e| fail(&e))?.into()
        }
        SignalSpec::Fock { n } => fock_state(&[n], &[n]).map_err(|e| fail(&e))?.into(),
        SignalSpec::Thermal { mean } => thermal_state(mean, STATE_TOLERANCE).map_err(|e| fail(&e))?.into(),
    })
}

pub fn input(cfg: &SampleConfig) -> Result<PairInput> {
    let beta = C64::new(cfg.beta2.sqrt(), 0.0);
    Ok(match cfg.signal {
        SignalSpec::Coherent { alpha } => PairInput::CoherentProduct { alpha: C64::new(alpha, 0.0), beta },
        _ => PairInput::SignalWithCoherentLo { signal: signal(&cfg.signal)?, beta },
    })
}

pub fn detector(cfg: &SampleConfig) -> Detector {
    match cfg.detector {
        DetectorName::Hom => Detector::Hom(cfg.theta),
        DetectorName::Het => Detector::Het,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatisticCheck {
    pub name: &'static str,
    pub exact: f64,
    pub sample_mean: f64,
    pub standard_error: f64,
    pub z_score: f64,
    pub deficit: f64,
}

impl StatisticCheck {
    pub fn passed(&self) -> bool {
        self.z_score.abs() <= Z_LIMIT
    }
}

fn check(name: &'static str, dist: &OutcomeDistribution, shots: &[Vec<u32>], h: impl Fn(&[u32]) -> f64) -> StatisticCheck {
    let exact = dist.expect(&h);
    let second = dist.expect(|c| h(c).powi(2));
    let n = shots.len() as f64;
    let sample_mean = shots.iter().map(|c| h(c)).sum::<f64>() / n;
    let var = (second - exact * exact).max(0.0);
    let standard_error = (var / n).sqrt();
    let z_score = if standard_error > 0.0 {
        (sample_mean - exact) / standard_error
    } else if (sample_mean - exact).abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    };
    StatisticCheck { name, exact, sample_mean, standard_error, z_score, deficit: dist.mass_deficit() }
}

pub struct SampleRun {
    pub distribution: OutcomeDistribution,
    pub shots: Vec<Vec<u32>>,
    pub checks: Vec<StatisticCheck>,
}

pub fn draw(cfg: &SampleConfig, seed: u64) -> Result<SampleRun> {
    cfg.validate()?;
    let det = detector(cfg);
    let dist = distribution(&input(cfg)?, det, cfg.backend.backend(), None).map_err(|e| CliError::backend("sample distribution", e))?;
    let shots = sample_counts(&dist, seed, cfg.shots).map_err(|e| CliError::backend("sample draw", e))?;
    let checks = match det {
        Detector::Hom(_) => vec![
            check("z", &dist, &shots, z_counts),
            check("z2", &dist, &shots, |c| z_counts(c).powi(2)),
        ],
        Detector::Het => vec![
            check("alpha_re", &dist, &shots, |c| alpha_counts(c).re),
            check("alpha_im", &dist, &shots, |c| alpha_counts(c).im),
        ],
    };
    Ok(SampleRun { distribution: dist, shots, checks })
}

pub fn run(cfg: &SampleConfig, ctx: &Context) -> Result<Outcome> {
    let run = draw(cfg, ctx.seed)?;
    let width = run.distribution.detector().counters();
    let mut header: Vec<String> = vec!["shot".into()];
    header.extend((0..width).map(|i| format!("n{i}")));
    header.push("deficit".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let deficit = num(run.distribution.mass_deficit());
    let rows: Vec<Vec<String>> = run
        .shots
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut r = vec![i.to_string()];
            r.extend(c.iter().map(u32::to_string));
            r.push(deficit.clone());
            r
        })
        .collect();
    let stats: Vec<Vec<String>> = run
        .checks
        .iter()
        .map(|s| {
            vec![
                s.name.to_string(),
                num(s.exact),
                num(s.sample_mean),
                num(s.standard_error),
                num(s.z_score),
                if s.passed() { "true" } else { "false" }.to_string(),
                num(s.deficit),
            ]
        })
        .collect();
    let files = vec![
        write_csv(&ctx.out, "samples.csv", &header, &rows)?,
        write_csv(
            &ctx.out,
            "sample_summary.csv",
            &["statistic", "exact", "sample_mean", "standard_error", "z_score", "passed", "deficit"],
            &stats,
        )?,
    ];
    let summary = run
        .checks
        .iter()
        .map(|s| {
            format!("{}: sample mean {} vs exact {} ({} standard errors)", s.name, num(s.sample_mean), num(s.exact), num(s.z_score))
        })
        .collect();
    Ok(Outcome { passed: run.checks.iter().all(StatisticCheck::passed), summary, files })
}
