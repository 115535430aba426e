//! Monte-Carlo model of the photon-counting experiment.
//!
//! A *setting* is a pair of measurement axes, one per qubit. Each setting
//! yields four coincidence counts `N(A, B)` for `(A, B) ∈ {±1}²`, stored in
//! the order `[N(+,+), N(+,−), N(−,+), N(−,−)]`. Counts are drawn
//! independently from Poisson distributions whose means are the target shot
//! number times the Born probabilities.
//!
//! This layer is concrete in `f64`.

mod estimate;
mod pipeline;
mod sampling;
mod tomography;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::BlochVector;

pub use estimate::{
    bootstrap_chsh, bootstrap_steering, chsh_measurement_settings, estimate_chsh,
    estimate_steering, steering_settings, Estimate, EstimateMethod, DEFAULT_RESAMPLES,
};
pub use pipeline::{
    full_pipeline, physical_state, CorrectionSummary, ExactSummary, PipelineConfig, PipelineReport,
    SampledSummary, SchemeViolation, DEFAULT_SHOTS,
};
pub use sampling::{
    exact_table, outcome_probabilities, sample_counts, sample_counts_with, SamplingOptions,
};
pub use tomography::{
    bootstrap_tomography, is_informationally_complete, matrix_entries, pauli_tomography_settings,
    tomography, tomography_with, TomographyOptions, TomographyResult, TomographySummary,
};

/// Alice's and Bob's measurement axes for one setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub alice: BlochVector<f64>,
    pub bob: BlochVector<f64>,
}

impl Setting {
    pub fn new(alice: BlochVector<f64>, bob: BlochVector<f64>) -> Self {
        Self { alice, bob }
    }
}

/// Signs `(A, B)` of the four outcome slots.
pub const OUTCOME_SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// Anything the estimators can read: per-setting non-negative outcome
/// weights (counts or exact probabilities).
pub trait OutcomeData {
    fn settings(&self) -> &[Setting];
    fn weights(&self, setting: usize) -> [f64; 4];
    /// `true` when weights are exact probabilities rather than samples.
    fn is_exact(&self) -> bool {
        false
    }
}

/// Sampled coincidence counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountTable {
    pub settings: Vec<Setting>,
    pub counts: Vec<[u64; 4]>,
    pub shots_target: u64,
}

impl CountTable {
    pub fn new(settings: Vec<Setting>, counts: Vec<[u64; 4]>, shots_target: u64) -> Result<Self> {
        if settings.is_empty() {
            return Err(Error::domain("a count table needs at least one setting"));
        }
        if settings.len() != counts.len() {
            return Err(Error::domain("one count quadruple per setting is required"));
        }
        Ok(Self {
            settings,
            counts,
            shots_target,
        })
    }

    pub fn total(&self, setting: usize) -> u64 {
        self.counts[setting].iter().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl OutcomeData for CountTable {
    fn settings(&self) -> &[Setting] {
        &self.settings
    }

    fn weights(&self, setting: usize) -> [f64; 4] {
        self.counts[setting].map(|c| c as f64)
    }
}

/// Exact outcome probabilities, the infinite-count limit of a [`CountTable`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub settings: Vec<Setting>,
    pub probabilities: Vec<[f64; 4]>,
}

impl OutcomeData for ProbabilityTable {
    fn settings(&self) -> &[Setting] {
        &self.settings
    }

    fn weights(&self, setting: usize) -> [f64; 4] {
        self.probabilities[setting]
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// `Ê = (N₊₊ − N₊₋ − N₋₊ + N₋₋) / N` for one setting.
pub(crate) fn correlation(w: &[f64; 4]) -> Option<f64> {
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        Some((w[0] - w[1] - w[2] + w[3]) / total)
    } else {
        None
    }
}
