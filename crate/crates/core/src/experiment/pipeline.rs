use serde::{Deserialize, Serialize};

use super::estimate::chsh_measurement_settings;
use super::tomography::{matrix_entries, TomographySummary};
use super::{
    bootstrap_chsh, bootstrap_steering, estimate_chsh, estimate_steering,
    pauli_tomography_settings, sample_counts, steering_settings, tomography, Estimate,
    DEFAULT_RESAMPLES,
};
use crate::bounds::steering_bound;
use crate::error::{Error, Result};
use crate::geometry::{scheme_axes, SUPPORTED_SETTINGS};
use crate::linalg::{fidelity, kron, ComplexMatrix, DensityMatrix};
use crate::protocol::{canonical_chsh_settings, chsh_max, honest_steering};
use crate::seeds::{
    derive_seed, BOOTSTRAP_STREAM, CHSH_STREAM, CORRECTION_STREAM, STEERING_STREAM,
    TOMOGRAPHY_STREAM,
};
use crate::states::{
    bell_local_certified, classify, depolarize_one_sided, find_local_correction, linear_entropy,
    prepare_via_gate, tangle, werner, CorrectionOptions, Regime, WernerParameter,
};

/// Target mean counts per outcome setting when none is given.
pub const DEFAULT_SHOTS: u64 = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    pub mu: f64,
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    pub bootstrap_resamples: usize,
    pub correction_restarts: usize,
}

impl PipelineConfig {
    pub fn new(mu: f64, n: usize, shots: u64, seed: u64) -> Self {
        Self {
            mu,
            n,
            shots,
            seed,
            bootstrap_resamples: DEFAULT_RESAMPLES,
            correction_restarts: CorrectionOptions::default().restarts,
        }
    }
}

/// One scheme's exact steering numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeViolation {
    pub n: usize,
    pub s_value: f64,
    pub bound: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub s_value: f64,
    pub bound: f64,
    pub steering_violated: bool,
    pub b_max: f64,
    pub chsh_violated: bool,
    pub tangle: f64,
    pub linear_entropy: f64,
    pub regime: Regime,
    pub bell_local_certified: bool,
    pub violations_by_n: Vec<SchemeViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSummary {
    pub per_setting: Vec<f64>,
    pub steering: Estimate,
    pub steering_bootstrap: Estimate,
    pub steering_violated: bool,
    pub chsh: Estimate,
    pub chsh_bootstrap: Estimate,
    pub chsh_violated: bool,
    /// Regime implied by reading `Ŝ_n` as a Werner parameter.
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSummary {
    pub mu_hat: f64,
    pub angles: [f64; 3],
    pub residual_cost: f64,
    pub regime: Regime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub mu: f64,
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    pub exact: ExactSummary,
    pub sampled: SampledSummary,
    pub tomography: TomographySummary,
    pub correction: CorrectionSummary,
}

impl PipelineReport {
    pub fn validate(&self) -> Result<()> {
        WernerParameter::new(self.mu)?;
        if !SUPPORTED_SETTINGS.contains(&self.n) || self.sampled.per_setting.len() != self.n {
            return Err(Error::domain("report n is inconsistent"));
        }
        if self.exact.steering_violated != (self.exact.s_value - self.exact.bound > 1e-12) {
            return Err(Error::domain("exact violation flag is inconsistent"));
        }
        if self.tomography.rho_hat.len() != 16 {
            return Err(Error::domain("rho_hat must have 16 entries"));
        }
        for e in [
            &self.sampled.steering,
            &self.sampled.chsh,
            &self.sampled.steering_bootstrap,
        ] {
            if !(e.std_error.is_finite() && e.std_error >= 0.0) {
                return Err(Error::domain(
                    "standard errors must be finite and non-negative",
                ));
            }
        }
        Ok(())
    }
}

/// The Werner-like state the simulated source emits: the gate output with
/// weight `1 − μ` of one-sided depolarization on qubit 1.
pub fn physical_state(mu: WernerParameter<f64>) -> Result<DensityMatrix<f64>> {
    depolarize_one_sided(&prepare_via_gate(), 1.0 - mu.get())
}

/// Preparation, tomography, local correction, sampled steering and CHSH
/// estimation, and exact reference values, for one seed.
///
/// Independent random streams are derived from `config.seed` for
/// tomography, steering counts, CHSH counts, bootstrap and the correction
/// search.
pub fn full_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    let mu = WernerParameter::new(config.mu)?;
    let scheme = scheme_axes::<f64>(config.n)?;
    if config.shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    let stream = |k| derive_seed(config.seed, k);

    let ideal = werner(mu);
    let exact_steering = honest_steering(&ideal, &scheme)?;
    let exact_chsh = chsh_max(&ideal)?;
    let mut violations_by_n = Vec::with_capacity(SUPPORTED_SETTINGS.len());
    for n in SUPPORTED_SETTINGS {
        let report = honest_steering(&ideal, &scheme_axes::<f64>(n)?)?;
        violations_by_n.push(SchemeViolation {
            n,
            s_value: report.s_value,
            bound: report.bound,
            violated: report.violated,
        });
    }
    let exact = ExactSummary {
        s_value: exact_steering.s_value,
        bound: exact_steering.bound,
        steering_violated: exact_steering.violated,
        b_max: exact_chsh.b_value,
        chsh_violated: exact_chsh.violated,
        tangle: tangle(&ideal)?,
        linear_entropy: linear_entropy(&ideal),
        regime: classify(mu),
        bell_local_certified: bell_local_certified(mu),
        violations_by_n,
    };

    let physical = physical_state(mu)?;
    let tomo_table = sample_counts(
        &physical,
        &pauli_tomography_settings(),
        config.shots,
        stream(TOMOGRAPHY_STREAM),
    )?;
    let reconstructed = tomography(&tomo_table)?;
    let options = CorrectionOptions {
        restarts: config.correction_restarts,
        seed: stream(CORRECTION_STREAM),
        ..CorrectionOptions::default()
    };
    let correction = find_local_correction(&reconstructed.rho, options)?;
    let mu_hat = correction.mu_hat.clamp(0.0, 1.0);
    let correction_summary = CorrectionSummary {
        mu_hat,
        angles: correction.angles,
        residual_cost: correction.residual_cost,
        regime: classify(WernerParameter::new(mu_hat)?),
    };
    let tomography_summary = TomographySummary {
        rho_hat: matrix_entries(reconstructed.rho.matrix()),
        fidelity_to_target: fidelity(&reconstructed.rho, &physical)?,
        tangle: tangle(&reconstructed.rho)?,
        linear_entropy: linear_entropy(&reconstructed.rho),
        iterations: reconstructed.iterations,
    };

    // Applying Û on qubit 1 is the same as rotating Alice's analysers, so the
    // corrected state is sampled with the canonical settings.
    let u_full = kron(&correction.unitary, &ComplexMatrix::identity(2))?;
    let corrected = physical.evolve(&u_full);
    let steer_table = sample_counts(
        &corrected,
        &steering_settings(&scheme),
        config.shots,
        stream(STEERING_STREAM),
    )?;
    let (steer_report, steering) = estimate_steering(&steer_table, &scheme)?;
    let bootstrap_seed = stream(BOOTSTRAP_STREAM);
    let steering_bootstrap = bootstrap_steering(
        &steer_table,
        &scheme,
        config.bootstrap_resamples,
        bootstrap_seed,
    )?;
    let chsh_settings = chsh_measurement_settings(&canonical_chsh_settings());
    let chsh_table = sample_counts(
        &corrected,
        &chsh_settings,
        config.shots,
        stream(CHSH_STREAM),
    )?;
    let chsh = estimate_chsh(&chsh_table)?;
    let chsh_bootstrap = bootstrap_chsh(
        &chsh_table,
        config.bootstrap_resamples,
        derive_seed(bootstrap_seed, 1),
    )?;
    let bound = steering_bound(&scheme)?.value;
    let s_as_mu = steering.value.clamp(0.0, 1.0);
    let sampled = SampledSummary {
        per_setting: steer_report.per_setting,
        steering_violated: steer_report.violated,
        chsh_violated: chsh.value - 2.0 > 1e-12,
        regime: classify(WernerParameter::new(s_as_mu)?),
        steering,
        steering_bootstrap,
        chsh,
        chsh_bootstrap,
    };
    debug_assert_eq!(bound, steer_report.bound);

    Ok(PipelineReport {
        mu: config.mu,
        n: config.n,
        shots: config.shots,
        seed: config.seed,
        exact,
        sampled,
        tomography: tomography_summary,
        correction: correction_summary,
    })
}
