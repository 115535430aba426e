use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::{CountTable, ProbabilityTable, Setting, OUTCOME_SIGNS};
use crate::error::{Error, Result};
use crate::linalg::{kron, pauli_along, ComplexMatrix, DensityMatrix};
use crate::seeds::derive_seed;

/// Tolerance on `|Σ p − 1|` before sampling.
const PROBABILITY_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingOptions {
    /// Uniform detection efficiency in `(0, 1]`. Scales every Poisson mean,
    /// so it changes totals but not correlations.
    pub efficiency: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self { efficiency: 1.0 }
    }
}

/// `p(A, B) = Tr[(Π_A ⊗ Π_B) ρ]` with `Π_± = (I ± σ)/2`.
pub fn outcome_probabilities(rho: &DensityMatrix<f64>, setting: &Setting) -> Result<[f64; 4]> {
    if rho.dim() != 4 {
        return Err(Error::domain(
            "outcome probabilities need a two-qubit state",
        ));
    }
    let sa = pauli_along(&setting.alice)?;
    let sb = pauli_along(&setting.bob)?;
    let id = ComplexMatrix::identity(2);
    let mut p = [0.0; 4];
    for (slot, &(a, b)) in p.iter_mut().zip(&OUTCOME_SIGNS) {
        let pa = (&id + &sa.scale(a)).scale(0.5);
        let pb = (&id + &sb.scale(b)).scale(0.5);
        *slot = rho.expectation(&kron(&pa, &pb)?);
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL || p.iter().any(|x| !x.is_finite()) {
        return Err(Error::Internal(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    Ok(p.map(|x| x.max(0.0)))
}

/// The exact-probability table for `settings`.
pub fn exact_table(rho: &DensityMatrix<f64>, settings: &[Setting]) -> Result<ProbabilityTable> {
    let probabilities = settings
        .iter()
        .map(|s| outcome_probabilities(rho, s))
        .collect::<Result<_>>()?;
    Ok(ProbabilityTable {
        settings: settings.to_vec(),
        probabilities,
    })
}

/// Poisson-sampled coincidence counts with mean `shots · p(A, B)` per
/// outcome. Setting `k` draws from its own stream seeded with
/// `derive_seed(seed, k)`.
pub fn sample_counts(
    rho: &DensityMatrix<f64>,
    settings: &[Setting],
    shots: u64,
    seed: u64,
) -> Result<CountTable> {
    sample_counts_with(rho, settings, shots, seed, SamplingOptions::default())
}

pub fn sample_counts_with(
    rho: &DensityMatrix<f64>,
    settings: &[Setting],
    shots: u64,
    seed: u64,
    options: SamplingOptions,
) -> Result<CountTable> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    if settings.is_empty() {
        return Err(Error::domain("no measurement settings given"));
    }
    if !(options.efficiency > 0.0 && options.efficiency <= 1.0) {
        return Err(Error::domain(format!(
            "efficiency must lie in (0, 1], got {}",
            options.efficiency
        )));
    }
    let scale = shots as f64 * options.efficiency;
    let mut counts = Vec::with_capacity(settings.len());
    for (k, setting) in settings.iter().enumerate() {
        let p = outcome_probabilities(rho, setting)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64));
        counts.push(p.map(|pk| poisson(&mut rng, scale * pk)));
    }
    CountTable::new(settings.to_vec(), counts, shots)
}

pub(crate) fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite Poisson mean");
    let draw: f64 = dist.sample(rng);
    draw as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::BlochVector;
    use crate::states::{werner, WernerParameter};

    fn w(mu: f64) -> DensityMatrix<f64> {
        werner(WernerParameter::new(mu).unwrap())
    }

    #[test]
    fn singlet_zz_never_gives_equal_outcomes() {
        let z = BlochVector::new(0.0, 0.0, 1.0);
        let t = sample_counts(&w(1.0), &[Setting::new(z, z)], 1_000_000, 3).unwrap();
        assert_eq!(t.counts[0][0], 0);
        assert_eq!(t.counts[0][3], 0);
        let mean = 500_000.0;
        for c in [t.counts[0][1], t.counts[0][2]] {
            assert!((c as f64 - mean).abs() < 5.0 * mean.sqrt());
        }
    }

    #[test]
    fn maximally_mixed_counts_are_flat() {
        let x = BlochVector::new(1.0, 0.0, 0.0);
        let shots = 40_000;
        let t = sample_counts(&w(0.0), &[Setting::new(x, x)], shots, 11).unwrap();
        let mean = shots as f64 / 4.0;
        for &c in &t.counts[0] {
            assert!((c as f64 - mean).abs() < 5.0 * mean.sqrt());
        }
    }

    #[test]
    fn same_seed_same_counts() {
        let z = BlochVector::new(0.0, 0.0, 1.0);
        let s = [Setting::new(-z, z), Setting::new(z, z)];
        let a = sample_counts(&w(0.6), &s, 1000, 99).unwrap();
        let b = sample_counts(&w(0.6), &s, 1000, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_counts(&w(0.6), &s, 1000, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_arguments() {
        let z = BlochVector::new(0.0, 0.0, 1.0);
        let s = [Setting::new(z, z)];
        assert!(sample_counts(&w(0.5), &s, 0, 1).is_err());
        assert!(sample_counts(&w(0.5), &[], 10, 1).is_err());
        let opts = SamplingOptions { efficiency: 0.0 };
        assert!(sample_counts_with(&w(0.5), &s, 10, 1, opts).is_err());
        let bad_axis = [Setting::new(z * 2.0, z)];
        assert!(sample_counts(&w(0.5), &bad_axis, 10, 1).is_err());
    }

    #[test]
    fn efficiency_scales_totals() {
        let z = BlochVector::new(0.0, 0.0, 1.0);
        let s = [Setting::new(z, z)];
        let t = sample_counts_with(
            &w(0.5),
            &s,
            100_000,
            5,
            SamplingOptions { efficiency: 0.25 },
        )
        .unwrap();
        let total = t.total(0) as f64;
        assert!((total - 25_000.0).abs() < 5.0 * 25_000f64.sqrt());
    }

    #[test]
    fn probabilities_sum_to_one() {
        let s = Setting::new(
            BlochVector::new(0.6, 0.0, 0.8),
            BlochVector::new(0.0, 1.0, 0.0),
        );
        let p = outcome_probabilities(&w(0.3), &s).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
