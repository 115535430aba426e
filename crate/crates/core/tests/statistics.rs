//! Seeded Monte-Carlo checks of the sampling layer and its estimators.

use epr_steering::experiment::{
    bootstrap_steering, bootstrap_tomography, estimate_steering, pauli_tomography_settings,
    sample_counts, steering_settings, CountTable, Setting, TomographyOptions,
};
use epr_steering::seeds::derive_seed;
use epr_steering::{linear_entropy, scheme_axes, tangle, werner, Bloch, Density, WernerParameter};
use num_complex::Complex;

fn w(mu: f64) -> Density {
    werner(WernerParameter::new(mu).unwrap())
}

#[test]
fn steering_error_shrinks_like_inverse_root_shots() {
    let scheme = scheme_axes::<f64>(3).unwrap();
    let settings = steering_settings(&scheme);
    let rho = w(0.6);
    let mut scaled = Vec::new();
    for shots in [100u64, 1_000, 10_000, 100_000] {
        let mut total = 0.0;
        for seed in 0..200 {
            let table = sample_counts(&rho, &settings, shots, derive_seed(shots, seed)).unwrap();
            let (_, est) = estimate_steering(&table, &scheme).unwrap();
            total += (est.value - 0.6).abs();
        }
        let mean_error = total / 200.0;
        scaled.push(mean_error * (shots as f64).sqrt());
    }
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().cloned().fold(0.0, f64::max);
    assert!(
        hi / lo < 3.0,
        "√shots · |error| varies too much: {scaled:?}"
    );
}

#[test]
fn empirical_correlation_is_within_five_standard_errors() {
    let scheme = scheme_axes::<f64>(6).unwrap();
    let shots = 10_000;
    let table = sample_counts(&w(0.6), &steering_settings(&scheme), shots, 12).unwrap();
    for k in 0..table.len() {
        let c = table.counts[k];
        let n = table.total(k) as f64;
        let e = (c[0] as f64 - c[1] as f64 - c[2] as f64 + c[3] as f64) / n;
        assert!((e - 0.6).abs() < 5.0 / (shots as f64).sqrt());
    }
}

/// `cos θ |00⟩ + sin θ |11⟩` has a biased marginal on Bob's side.
fn biased_state() -> Density {
    let (c, s) = (0.9f64.cos(), 0.9f64.sin());
    let z = Complex::new(0.0, 0.0);
    Density::pure(&[Complex::new(c, 0.0), z, z, Complex::new(s, 0.0)]).unwrap()
}

fn bob_plus_fraction(table: &CountTable, k: usize) -> f64 {
    let c = table.counts[k];
    (c[0] + c[2]) as f64 / table.total(k) as f64
}

#[test]
fn bob_marginal_does_not_depend_on_alice_axis() {
    let rho = biased_state();
    let bob = Bloch::new(0.0, 0.0, 1.0);
    let settings = [
        Setting::new(Bloch::new(1.0, 0.0, 0.0), bob),
        Setting::new(Bloch::new(0.0, 0.0, 1.0), bob),
        Setting::new(Bloch::new(0.6, 0.8, 0.0), bob),
    ];
    let shots = 10_000;
    let runs = 100;
    for other in 1..settings.len() {
        let mut diffs = Vec::with_capacity(runs);
        for seed in 0..runs as u64 {
            let table = sample_counts(&rho, &settings, shots, seed).unwrap();
            diffs.push(bob_plus_fraction(&table, 0) - bob_plus_fraction(&table, other));
        }
        let mean = diffs.iter().sum::<f64>() / runs as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
        let sem = (var / runs as f64).sqrt();
        assert!(
            mean.abs() < 5.0 * sem,
            "setting {other}: mean {mean}, sem {sem}"
        );
    }
    // The marginal itself is cos²θ regardless of Alice.
    let table = sample_counts(&rho, &settings, 1_000_000, 5).unwrap();
    let expected = 0.9f64.cos().powi(2);
    for k in 0..settings.len() {
        assert!((bob_plus_fraction(&table, k) - expected).abs() < 5e-3);
    }
}

#[test]
fn delta_and_bootstrap_errors_agree_across_shots() {
    let scheme = scheme_axes::<f64>(4).unwrap();
    let settings = steering_settings(&scheme);
    for (i, shots) in [1_000u64, 10_000, 100_000].into_iter().enumerate() {
        let table = sample_counts(&w(0.7), &settings, shots, 31 + i as u64).unwrap();
        let (_, delta) = estimate_steering(&table, &scheme).unwrap();
        let boot = bootstrap_steering(&table, &scheme, 2000, 77).unwrap();
        let rel = (boot.std_error - delta.std_error).abs() / delta.std_error;
        assert!(
            rel < 0.1,
            "shots={shots}: delta {} vs bootstrap {}",
            delta.std_error,
            boot.std_error
        );
    }
}

#[test]
fn tomography_error_bars_have_nominal_coverage() {
    let rho = w(0.7);
    let true_tangle = tangle(&rho).unwrap();
    let true_entropy = linear_entropy(&rho);
    let settings = pauli_tomography_settings();
    let options = TomographyOptions::default();
    let seeds = 300u64;
    let (mut hit_t, mut hit_l) = (0, 0);
    for seed in 0..seeds {
        let table = sample_counts(&rho, &settings, 5_000, derive_seed(0xc0ffee, seed)).unwrap();
        let (t, l) = bootstrap_tomography(&table, 100, seed, options).unwrap();
        hit_t += usize::from((t.value - true_tangle).abs() <= t.std_error);
        hit_l += usize::from((l.value - true_entropy).abs() <= l.std_error);
    }
    let (ct, cl) = (hit_t as f64 / seeds as f64, hit_l as f64 / seeds as f64);
    eprintln!("coverage: tangle {ct}, linear entropy {cl}");
    // 0.68 ± 4 binomial standard deviations (0.027 each at 300 runs).
    for (name, c) in [("tangle", ct), ("linear entropy", cl)] {
        assert!((0.57..=0.79).contains(&c), "{name} coverage {c}");
    }
}
