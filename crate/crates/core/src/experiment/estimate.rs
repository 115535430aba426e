use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::poisson;
use super::{correlation, OutcomeData, Setting};
use crate::bounds::steering_bound;
use crate::error::{Error, Result};
use crate::geometry::MeasurementScheme;
use crate::protocol::{ChshSettings, SteeringReport};
use crate::seeds::derive_seed;

pub const DEFAULT_RESAMPLES: usize = 1000;

const AXIS_MATCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimateMethod {
    AnalyticPropagation,
    MonteCarlo { resamples: usize },
}

/// A sampled quantity with its one-standard-deviation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub method: EstimateMethod,
}

/// Honest-steering settings `(−u_k, u_k)` for a scheme.
pub fn steering_settings(scheme: &MeasurementScheme<f64>) -> Vec<Setting> {
    scheme.axes.iter().map(|u| Setting::new(-*u, *u)).collect()
}

fn check_steering_layout(data: &impl OutcomeData, scheme: &MeasurementScheme<f64>) -> Result<()> {
    let settings = data.settings();
    if settings.len() != scheme.n {
        return Err(Error::domain(format!(
            "table has {} settings but the scheme has {}",
            settings.len(),
            scheme.n
        )));
    }
    for (k, (s, u)) in settings.iter().zip(&scheme.axes).enumerate() {
        if s.bob.max_abs_diff(u) > AXIS_MATCH_TOL || s.alice.max_abs_diff(&-*u) > AXIS_MATCH_TOL {
            return Err(Error::domain(format!(
                "setting {k} does not match (-u_k, u_k)"
            )));
        }
    }
    Ok(())
}

/// Per-setting correlation and its delta-method variance. For independent
/// Poisson counts with `S = N₊₊ + N₋₋`, `D = N₊₋ + N₋₊`, `N = S + D`, the
/// propagated variance of `Ê = (S − D)/N` is `4SD/N³ = (1 − Ê²)/N`.
fn correlation_with_variance(data: &impl OutcomeData, k: usize) -> Result<(f64, f64)> {
    let w = data.weights(k);
    let e = correlation(&w)
        .ok_or_else(|| Error::Estimation(format!("setting {k} recorded no counts")))?;
    if data.is_exact() {
        return Ok((e, 0.0));
    }
    let total: f64 = w.iter().sum();
    let same = w[0] + w[3];
    let diff = w[1] + w[2];
    Ok((e, 4.0 * same * diff / (total * total * total)))
}

/// `Ŝ_n` from honest-steering counts, with delta-method error.
pub fn estimate_steering(
    data: &impl OutcomeData,
    scheme: &MeasurementScheme<f64>,
) -> Result<(SteeringReport<f64>, Estimate)> {
    check_steering_layout(data, scheme)?;
    let mut per_setting = Vec::with_capacity(scheme.n);
    let mut variance = 0.0;
    for k in 0..scheme.n {
        let (e, v) = correlation_with_variance(data, k)?;
        per_setting.push(e);
        variance += v;
    }
    let n = scheme.n as f64;
    let bound = steering_bound(scheme)?.value;
    let report = SteeringReport::from_correlations(per_setting, bound)?;
    let estimate = Estimate {
        value: report.s_value,
        std_error: variance.sqrt() / n,
        method: EstimateMethod::AnalyticPropagation,
    };
    Ok((report, estimate))
}

/// Parametric bootstrap: every count is redrawn from a Poisson distribution
/// centred on its observed value and `statistic` is recomputed.
fn bootstrap<F>(counts: &[[f64; 4]], resamples: usize, seed: u64, statistic: F) -> Result<Estimate>
where
    F: Fn(&[[f64; 4]]) -> Option<f64>,
{
    if resamples < 2 {
        return Err(Error::domain("bootstrap needs at least two resamples"));
    }
    let centre = statistic(counts)
        .ok_or_else(|| Error::Estimation("empty setting in observed counts".into()))?;
    let mut draws = Vec::with_capacity(resamples);
    let mut scratch = counts.to_vec();
    let mut r = 0u64;
    while draws.len() < resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r));
        r += 1;
        for (out, observed) in scratch.iter_mut().zip(counts) {
            *out = observed.map(|c| poisson(&mut rng, c) as f64);
        }
        if let Some(v) = statistic(&scratch) {
            draws.push(v);
        }
        if r as usize > 10 * resamples + 100 {
            return Err(Error::Estimation(
                "bootstrap resamples keep producing empty settings".into(),
            ));
        }
    }
    let m = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / m;
    let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (m - 1.0);
    Ok(Estimate {
        value: centre,
        std_error: var.sqrt(),
        method: EstimateMethod::MonteCarlo { resamples },
    })
}

fn observed_counts(data: &impl OutcomeData) -> Result<Vec<[f64; 4]>> {
    if data.is_exact() {
        return Err(Error::domain(
            "bootstrap needs sampled counts, not exact probabilities",
        ));
    }
    Ok((0..data.settings().len())
        .map(|k| data.weights(k))
        .collect())
}

/// Bootstrap error of `Ŝ_n`.
pub fn bootstrap_steering(
    data: &impl OutcomeData,
    scheme: &MeasurementScheme<f64>,
    resamples: usize,
    seed: u64,
) -> Result<Estimate> {
    check_steering_layout(data, scheme)?;
    let counts = observed_counts(data)?;
    bootstrap(&counts, resamples, seed, |c| {
        let sum = c.iter().map(correlation).sum::<Option<f64>>()?;
        Some(sum / c.len() as f64)
    })
}

fn chsh_combination(e: [f64; 4]) -> f64 {
    (e[0] + e[1] + e[2] - e[3]).abs()
}

/// Setting order expected by the CHSH estimators: `(a₁,b₁), (a₁,b₂),
/// (a₂,b₁), (a₂,b₂)`.
pub fn chsh_measurement_settings(s: &ChshSettings<f64>) -> Vec<Setting> {
    vec![
        Setting::new(s.alice[0], s.bob[0]),
        Setting::new(s.alice[0], s.bob[1]),
        Setting::new(s.alice[1], s.bob[0]),
        Setting::new(s.alice[1], s.bob[1]),
    ]
}

/// `B̂` from four CHSH settings with delta-method error.
pub fn estimate_chsh(data: &impl OutcomeData) -> Result<Estimate> {
    if data.settings().len() != 4 {
        return Err(Error::domain("CHSH estimation needs exactly four settings"));
    }
    let mut e = [0.0; 4];
    let mut variance = 0.0;
    for (k, slot) in e.iter_mut().enumerate() {
        let (value, var) = correlation_with_variance(data, k)?;
        *slot = value;
        variance += var;
    }
    Ok(Estimate {
        value: chsh_combination(e),
        std_error: variance.sqrt(),
        method: EstimateMethod::AnalyticPropagation,
    })
}

pub fn bootstrap_chsh(data: &impl OutcomeData, resamples: usize, seed: u64) -> Result<Estimate> {
    if data.settings().len() != 4 {
        return Err(Error::domain("CHSH estimation needs exactly four settings"));
    }
    let counts = observed_counts(data)?;
    bootstrap(&counts, resamples, seed, |c| {
        let mut e = [0.0; 4];
        for (slot, w) in e.iter_mut().zip(c) {
            *slot = correlation(w)?;
        }
        Some(chsh_combination(e))
    })
}
