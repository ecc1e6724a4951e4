use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use fock_core::random::seeded_rng;

use crate::circuits::Detector;
use crate::DetectionError;

/// Probabilities over count tuples for one measurement setting, stored flat.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    detector: Detector,
    counts: Vec<u32>,
    probs: Vec<f64>,
    mass_deficit: f64,
}

impl OutcomeDistribution {
    /// Negative round-off (down to -1e-12) is clamped; lower values are rejected.
    pub fn new(detector: Detector, counts: Vec<u32>, probs: Vec<f64>, mass_deficit: f64) -> Result<Self, DetectionError> {
        let w = detector.counters();
        if counts.len() != probs.len() * w {
            return Err(DetectionError::InvalidInput("count array does not match the probabilities".into()));
        }
        if let Some(p) = probs.iter().find(|&&p| p < -1e-12 || !p.is_finite()) {
            return Err(DetectionError::InvalidInput(format!("invalid probability {p}")));
        }
        let probs = probs.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self { detector, counts, probs, mass_deficit: mass_deficit.max(0.0) })
    }

    pub fn detector(&self) -> Detector {
        self.detector
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> + '_ {
        self.counts.chunks(self.detector.counters()).zip(self.probs.iter().copied())
    }

    pub fn probability(&self, counts: &[u32]) -> f64 {
        self.iter().find(|(c, _)| *c == counts).map_or(0.0, |(_, p)| p)
    }

    pub fn expect(&self, h: impl Fn(&[u32]) -> f64) -> f64 {
        self.iter().map(|(c, p)| p * h(c)).sum()
    }

    /// Largest |P - Q| over the union of supports.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        use std::collections::HashMap;
        let mut m: HashMap<&[u32], f64> = self.iter().collect();
        for (c, q) in other.iter() {
            *m.entry(c).or_insert(0.0) -= q;
        }
        m.values().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// i.i.d. draws; the deficit mass is not sampled.
pub fn sample_counts(dist: &OutcomeDistribution, seed: u64, shots: usize) -> Result<Vec<Vec<u32>>, DetectionError> {
    if shots == 0 {
        return Err(DetectionError::InvalidInput("shots must be at least 1".into()));
    }
    let idx = WeightedIndex::new(&dist.probs).map_err(|e| DetectionError::InvalidInput(e.to_string()))?;
    let mut rng = seeded_rng(seed);
    let w = dist.detector.counters();
    Ok((0..shots)
        .map(|_| {
            let i = idx.sample(&mut rng);
            dist.counts[i * w..(i + 1) * w].to_vec()
        })
        .collect())
}
