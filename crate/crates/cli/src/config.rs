//! Versioned TOML scenario files. Every section is optional and falls back
//! to the defaults below; unknown keys are rejected.

use std::path::Path;

use detection::Backend;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// ExactFock builds the full three-mode circuit; beyond this LO intensity the
/// sectors get too large to be practical.
pub const EXACT_FOCK_MAX_BETA2: f64 = 9.0;
pub const COHERENT_LO_MAX_BETA2: f64 = 400.0;
pub const MAX_SWEEP_POINTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendName {
    ExactFock,
    CoherentLo,
    PoissonProduct,
}

impl BackendName {
    pub fn backend(self) -> Backend {
        match self {
            BackendName::ExactFock => Backend::ExactFock,
            BackendName::CoherentLo => Backend::CoherentLo,
            BackendName::PoissonProduct => Backend::PoissonProduct,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BackendName::ExactFock => "exact-fock",
            BackendName::CoherentLo => "coherent-lo",
            BackendName::PoissonProduct => "poisson-product",
        }
    }

    fn max_beta2(self) -> f64 {
        match self {
            BackendName::ExactFock => EXACT_FOCK_MAX_BETA2,
            BackendName::CoherentLo => COHERENT_LO_MAX_BETA2,
            BackendName::PoissonProduct => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub figure3: Figure3Config,
    #[serde(default)]
    pub bounds_check: BoundsCheckConfig,
    #[serde(default)]
    pub verify_appendix: AppendixConfig,
    #[serde(default)]
    pub entanglement_demo: DemoConfig,
    #[serde(default)]
    pub sample: SampleConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: None,
            figure3: Figure3Config::default(),
            bounds_check: BoundsCheckConfig::default(),
            verify_appendix: AppendixConfig::default(),
            entanglement_demo: DemoConfig::default(),
            sample: SampleConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Figure3Config {
    /// Real coherent amplitude of the signal.
    pub alpha: f64,
    /// Quadrature phase of the reported moments.
    pub theta: f64,
    pub beta2_start: f64,
    pub beta2_stop: f64,
    pub beta2_step: f64,
    pub backend: BackendName,
}

impl Default for Figure3Config {
    fn default() -> Self {
        Self { alpha: 1.4, theta: 0.0, beta2_start: 10.0, beta2_stop: 400.0, beta2_step: 10.0, backend: BackendName::PoissonProduct }
    }
}

impl Figure3Config {
    /// Sweep points start, start + step, ... up to stop (inclusive within
    /// 1e-9 of a step).
    pub fn sweep(&self) -> Vec<f64> {
        let n = ((self.beta2_stop - self.beta2_start) / self.beta2_step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.beta2_start + i as f64 * self.beta2_step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsCheckConfig {
    pub single_pair_states: usize,
    pub pair_states: usize,
    pub hybrid_states: usize,
}

impl Default for BoundsCheckConfig {
    fn default() -> Self {
        Self { single_pair_states: 100, pair_states: 50, hybrid_states: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppendixConfig {
    pub diagonal_max: u32,
    pub n_max: u32,
    pub m_max: u32,
    pub u_max: u32,
    pub w_max: u32,
    pub scalar_limit: u32,
    pub samples: usize,
    pub identity_cutoff: u32,
}

impl Default for AppendixConfig {
    fn default() -> Self {
        let s = verifier::AppendixSettings::default();
        Self {
            diagonal_max: s.diagonal_max,
            n_max: s.grid.n_max,
            m_max: s.grid.m_max,
            u_max: s.grid.u_max,
            w_max: s.grid.w_max,
            scalar_limit: s.scalar_limit,
            samples: s.samples,
            identity_cutoff: s.identity_cutoff,
        }
    }
}

impl AppendixConfig {
    pub fn settings(&self, seed: u64) -> verifier::AppendixSettings {
        verifier::AppendixSettings {
            diagonal_max: self.diagonal_max,
            grid: verifier::FamilyGrid { n_max: self.n_max, m_max: self.m_max, u_max: self.u_max, w_max: self.w_max },
            scalar_limit: self.scalar_limit,
            samples: self.samples,
            seed,
            identity_cutoff: self.identity_cutoff,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DemoConfig {
    pub squeezing: f64,
    /// LO intensities for the squeezed state.
    pub beta2: Vec<f64>,
    pub backend: BackendName,
    /// Also run r = 0 and the designed separable states.
    pub separable: bool,
    pub separable_beta2: Vec<f64>,
    /// Require certification of the squeezed state at the largest beta2.
    pub expect_certified: bool,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self {
            squeezing: 0.5,
            beta2: vec![25.0, 100.0, 400.0],
            backend: BackendName::CoherentLo,
            separable: true,
            separable_beta2: vec![9.0, 25.0, 100.0],
            expect_certified: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum SignalSpec {
    Coherent { alpha: f64 },
    Fock { n: u32 },
    Thermal { mean: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorName {
    Hom,
    Het,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleConfig {
    pub signal: SignalSpec,
    pub beta2: f64,
    pub detector: DetectorName,
    pub theta: f64,
    pub shots: usize,
    pub backend: BackendName,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            signal: SignalSpec::Coherent { alpha: 1.0 },
            beta2: 4.0,
            detector: DetectorName::Hom,
            theta: 0.0,
            shots: 10_000,
            backend: BackendName::CoherentLo,
        }
    }
}

fn bad<T>(field: &str, reason: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(format!("{field}: {}", reason.into())))
}

fn finite(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        bad(field, "must be finite")
    }
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        bad(field, format!("must be positive, got {v}"))
    }
}

fn within(field: &str, backend: BackendName, beta2: f64) -> Result<(), CliError> {
    if beta2 > backend.max_beta2() {
        return bad(field, format!("{beta2} is infeasible for {} (limit {})", backend.label(), backend.max_beta2()));
    }
    Ok(())
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return bad("schema_version", format!("expected {SCHEMA_VERSION}, got {}", cfg.schema_version));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

impl Figure3Config {
    pub fn validate(&self) -> Result<(), CliError> {
        finite("figure3.alpha", self.alpha)?;
        finite("figure3.theta", self.theta)?;
        positive("figure3.beta2_start", self.beta2_start)?;
        positive("figure3.beta2_step", self.beta2_step)?;
        finite("figure3.beta2_stop", self.beta2_stop)?;
        if self.beta2_stop < self.beta2_start {
            return bad("figure3.beta2_stop", "must not be below beta2_start");
        }
        if (self.beta2_stop - self.beta2_start) / self.beta2_step >= MAX_SWEEP_POINTS as f64 {
            return bad("figure3.beta2_step", format!("more than {MAX_SWEEP_POINTS} sweep points"));
        }
        within("figure3.beta2_stop", self.backend, self.beta2_stop)
    }
}

impl BoundsCheckConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.single_pair_states + self.pair_states + self.hybrid_states == 0 {
            return bad("bounds_check", "at least one suite needs a positive state count");
        }
        Ok(())
    }
}

impl AppendixConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples < 10_000 {
            return bad("verify_appendix.samples", format!("at least 10000 samples are required, got {}", self.samples));
        }
        if self.diagonal_max > 40 {
            return bad("verify_appendix.diagonal_max", "the diagonal grid is limited to 40");
        }
        if !(2..=20).contains(&self.identity_cutoff) {
            return bad("verify_appendix.identity_cutoff", "must lie in 2..=20");
        }
        if self.scalar_limit < 2 {
            return bad("verify_appendix.scalar_limit", "must be at least 2");
        }
        if self.n_max == 0 || self.m_max == 0 {
            return bad("verify_appendix.n_max", "the family grid needs n_max, m_max >= 1");
        }
        Ok(())
    }
}

impl DemoConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        finite("entanglement_demo.squeezing", self.squeezing)?;
        if self.squeezing < 0.0 {
            return bad("entanglement_demo.squeezing", "must be non-negative");
        }
        if self.squeezing > 2.0 {
            return bad("entanglement_demo.squeezing", "above 2 the truncated state is too large");
        }
        if self.backend == BackendName::PoissonProduct {
            return bad("entanglement_demo.backend", "poisson-product only handles coherent signals");
        }
        if self.beta2.is_empty() {
            return bad("entanglement_demo.beta2", "needs at least one value");
        }
        for &b in self.beta2.iter().chain(if self.separable { self.separable_beta2.as_slice() } else { &[] }) {
            positive("entanglement_demo.beta2", b)?;
            within("entanglement_demo.beta2", self.backend, b)?;
        }
        Ok(())
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("sample.beta2", self.beta2)?;
        finite("sample.theta", self.theta)?;
        within("sample.beta2", self.backend, self.beta2)?;
        if self.shots == 0 {
            return bad("sample.shots", "must be at least 1");
        }
        match self.signal {
            SignalSpec::Coherent { alpha } => finite("sample.signal.alpha", alpha)?,
            SignalSpec::Fock { n } if n > 50 => return bad("sample.signal.n", "at most 50"),
            SignalSpec::Fock { .. } => {}
            SignalSpec::Thermal { mean } => {
                finite("sample.signal.mean", mean)?;
                if !(0.0..=20.0).contains(&mean) {
                    return bad("sample.signal.mean", "must lie in [0, 20]");
                }
            }
        }
        if self.backend == BackendName::PoissonProduct && !matches!(self.signal, SignalSpec::Coherent { .. }) {
            return bad("sample.backend", "poisson-product needs a coherent signal");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_needs_a_version() {
        assert!(Config::parse("").is_err());
        assert_eq!(Config::parse("schema_version = 1").unwrap(), Config::default());
    }

    #[test]
    fn default_sweep() {
        let s = Figure3Config::default().sweep();
        assert_eq!(s.len(), 40);
        assert_eq!(s[0], 10.0);
        assert_eq!(*s.last().unwrap(), 400.0);
    }

    #[test]
    fn round_trip() {
        let text = toml::to_string(&Config::default()).unwrap();
        assert_eq!(Config::parse(&text).unwrap(), Config::default());
    }
}
