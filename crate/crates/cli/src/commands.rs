use epr_steering::experiment::{
    bootstrap_tomography, full_pipeline, matrix_entries, pauli_tomography_settings, physical_state,
    sample_counts, tomography, ExactSummary, PipelineConfig, PipelineReport, TomographyOptions,
};
use epr_steering::geometry::{directions, DirectionSet, Figure};
use epr_steering::protocol::canonical_chsh_settings;
use epr_steering::seeds::{derive_seed, BOOTSTRAP_STREAM, TOMOGRAPHY_STREAM};
use epr_steering::states::{bell_local_certified, classify, BELL_LOCAL_BELOW};
use epr_steering::{
    analytic_bound, cheat_steering, chsh_max, chsh_value, concurrence, fidelity, honest_steering,
    linear_entropy, make_ensemble, optimal_kind, scheme_axes, steering_bound, tangle, werner,
    Bound, Chsh, Density, DirectionKind, Ensemble, Regime, Scheme, Steering, Werner,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{
    BellArgs, BoundsArgs, CheatArgs, Kind, McArgs, ScanArgs, SchemeArgs, StateArgs, SteerArgs,
    TomoArgs,
};
use crate::output::Table;
use crate::CliError;

/// Grid points allowed in one scan.
const MAX_SCAN_POINTS: usize = 100_000;

/// Something a subcommand produced, renderable either way.
pub trait Report {
    fn json(&self) -> serde_json::Result<String>;
    fn table(&self) -> Table;
}

fn werner_parameter(mu: f64) -> Result<Werner, CliError> {
    Ok(Werner::new(mu)?)
}

fn settings_count(n: usize) -> Result<Figure, CliError> {
    Ok(Figure::from_settings(n)?)
}

fn direction_kind(kind: Kind) -> DirectionKind {
    match kind {
        Kind::Vertex => DirectionKind::Vertex,
        Kind::Dual => DirectionKind::Dual,
    }
}

fn kind_name(kind: DirectionKind) -> &'static str {
    match kind {
        DirectionKind::Vertex => "vertex",
        DirectionKind::Dual => "dual",
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SchemeOutput {
    pub scheme: Scheme,
    pub vertices: DirectionSet<f64>,
    pub duals: DirectionSet<f64>,
    pub pairwise_abs_dots: Vec<f64>,
}

impl Report for SchemeOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["role", "index", "x", "y", "z"]);
        let sets = [
            ("axis", &self.scheme.axes),
            ("vertex", &self.vertices.directions),
            ("dual", &self.duals.directions),
        ];
        for (role, vectors) in sets {
            for (i, v) in vectors.iter().enumerate() {
                t.push(vec![
                    role.into(),
                    i.into(),
                    v.x.into(),
                    v.y.into(),
                    v.z.into(),
                ]);
            }
        }
        t
    }
}

pub fn scheme(args: &SchemeArgs) -> Result<SchemeOutput, CliError> {
    settings_count(args.n)?;
    let scheme = scheme_axes::<f64>(args.n)?;
    Ok(SchemeOutput {
        pairwise_abs_dots: scheme.pairwise_abs_dots(),
        vertices: directions(args.n, DirectionKind::Vertex)?,
        duals: directions(args.n, DirectionKind::Dual)?,
        scheme,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundsOutput {
    #[serde(flatten)]
    pub bound: Bound,
    pub figure: Figure,
    pub analytic: f64,
    pub analytic_difference: f64,
}

impl Report for BoundsOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "n",
            "figure",
            "value",
            "analytic",
            "analytic_difference",
            "maximizers",
        ]);
        t.push(vec![
            self.bound.n.into(),
            self.figure.name().into(),
            self.bound.value.into(),
            self.analytic.into(),
            self.analytic_difference.into(),
            self.bound.maximizers.len().into(),
        ]);
        t
    }
}

pub fn bounds(args: &BoundsArgs) -> Result<BoundsOutput, CliError> {
    let figure = settings_count(args.n)?;
    let bound = steering_bound(&scheme_axes::<f64>(args.n)?)?;
    let analytic = analytic_bound::<f64>(args.n)?;
    Ok(BoundsOutput {
        analytic_difference: bound.value - analytic,
        analytic,
        figure,
        bound,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateOutput {
    pub mu: f64,
    pub source: String,
    pub tangle: f64,
    pub concurrence: f64,
    pub linear_entropy: f64,
    pub b_max: f64,
    pub regime: Regime,
    pub bell_local_certified: bool,
    pub bell_local_below: f64,
    pub rho: Vec<[f64; 2]>,
}

impl Report for StateOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "mu",
            "source",
            "tangle",
            "concurrence",
            "linear_entropy",
            "b_max",
            "regime",
            "bell_local_certified",
        ]);
        t.push(vec![
            self.mu.into(),
            self.source.as_str().into(),
            self.tangle.into(),
            self.concurrence.into(),
            self.linear_entropy.into(),
            self.b_max.into(),
            self.regime.name().into(),
            self.bell_local_certified.into(),
        ]);
        t
    }
}

fn state_for(mu: Werner, prepared: bool) -> Result<(Density, &'static str), CliError> {
    Ok(if prepared {
        (physical_state(mu)?, "prepared")
    } else {
        (werner(mu), "werner")
    })
}

pub fn state(args: &StateArgs) -> Result<StateOutput, CliError> {
    let mu = werner_parameter(args.mu)?;
    let (rho, source) = state_for(mu, args.prepared)?;
    Ok(StateOutput {
        mu: args.mu,
        source: source.into(),
        tangle: tangle(&rho)?,
        concurrence: concurrence(&rho)?,
        linear_entropy: linear_entropy(&rho),
        b_max: chsh_max(&rho)?.b_value,
        regime: classify(mu),
        bell_local_certified: bell_local_certified(mu),
        bell_local_below: BELL_LOCAL_BELOW,
        rho: matrix_entries(rho.matrix()),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SteerOutput {
    pub mu: f64,
    #[serde(flatten)]
    pub report: Steering,
    pub regime: Regime,
}

impl Report for SteerOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "mu",
            "n",
            "setting",
            "correlation",
            "s_value",
            "bound",
            "violated",
        ]);
        for (k, e) in self.report.per_setting.iter().enumerate() {
            t.push(vec![
                self.mu.into(),
                self.report.n.into(),
                k.into(),
                (*e).into(),
                self.report.s_value.into(),
                self.report.bound.into(),
                self.report.violated.into(),
            ]);
        }
        t
    }
}

pub fn steer(args: &SteerArgs) -> Result<SteerOutput, CliError> {
    let mu = werner_parameter(args.mu)?;
    settings_count(args.n)?;
    let report = honest_steering(&werner(mu), &scheme_axes(args.n)?)?;
    Ok(SteerOutput {
        mu: args.mu,
        report,
        regime: classify(mu),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CheatOutput {
    pub kind: DirectionKind,
    pub optimal_kind: DirectionKind,
    #[serde(flatten)]
    pub report: Steering,
    /// `S_n − C_n`; zero for an ensemble that saturates the bound.
    pub gap: f64,
    pub saturation: f64,
    pub ensemble: Ensemble,
}

impl Report for CheatOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "n",
            "kind",
            "states",
            "s_value",
            "bound",
            "gap",
            "saturation",
            "violated",
        ]);
        t.push(vec![
            self.report.n.into(),
            kind_name(self.kind).into(),
            self.ensemble.len().into(),
            self.report.s_value.into(),
            self.report.bound.into(),
            self.gap.into(),
            self.saturation.into(),
            self.report.violated.into(),
        ]);
        t
    }
}

pub fn cheat(args: &CheatArgs) -> Result<CheatOutput, CliError> {
    settings_count(args.n)?;
    let best = optimal_kind(args.n)?;
    let kind = args.kind.map_or(best, direction_kind);
    let ensemble = make_ensemble::<f64>(args.n, kind)?;
    let report = cheat_steering(&ensemble, &scheme_axes(args.n)?)?;
    Ok(CheatOutput {
        kind,
        optimal_kind: best,
        gap: report.s_value - report.bound,
        saturation: report.s_value / report.bound,
        report,
        ensemble,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BellOutput {
    pub mu: f64,
    #[serde(flatten)]
    pub report: Chsh,
    /// CHSH value with the fixed textbook settings.
    pub canonical_b_value: f64,
    pub bell_local_certified: bool,
}

impl Report for BellOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "mu",
            "b_max",
            "canonical_b_value",
            "violated",
            "bell_local_certified",
        ]);
        t.push(vec![
            self.mu.into(),
            self.report.b_value.into(),
            self.canonical_b_value.into(),
            self.report.violated.into(),
            self.bell_local_certified.into(),
        ]);
        t
    }
}

pub fn bell(args: &BellArgs) -> Result<BellOutput, CliError> {
    let mu = werner_parameter(args.mu)?;
    let rho = werner(mu);
    Ok(BellOutput {
        mu: args.mu,
        report: chsh_max(&rho)?,
        canonical_b_value: chsh_value(&rho, &canonical_chsh_settings())?.b_value,
        bell_local_certified: bell_local_certified(mu),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanRow {
    pub mu: f64,
    pub s_value: f64,
    pub bound: f64,
    pub steering_violated: bool,
    pub b_max: f64,
    pub chsh_violated: bool,
    pub tangle: f64,
    pub linear_entropy: f64,
    pub regime: Regime,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScanOutput {
    pub n: usize,
    pub rows: Vec<ScanRow>,
}

impl Report for ScanOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "mu",
            "n",
            "s_value",
            "bound",
            "steering_violated",
            "b_max",
            "chsh_violated",
            "tangle",
            "linear_entropy",
            "regime",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.mu.into(),
                self.n.into(),
                r.s_value.into(),
                r.bound.into(),
                r.steering_violated.into(),
                r.b_max.into(),
                r.chsh_violated.into(),
                r.tangle.into(),
                r.linear_entropy.into(),
                r.regime.name().into(),
            ]);
        }
        t
    }
}

/// Grid `from, from + step, …` up to `to`, tolerating rounding at the end.
fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) {
        return Err(CliError::Validation("scan limits must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Validation(format!(
            "--step must be positive, got {step}"
        )));
    }
    if from > to {
        return Err(CliError::Validation(format!(
            "--from {from} exceeds --to {to}"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SCAN_POINTS {
        return Err(CliError::Validation(format!(
            "scan has {count} points, limit is {MAX_SCAN_POINTS}"
        )));
    }
    Ok((0..count)
        .map(|i| {
            if i + 1 == count && (from + i as f64 * step - to).abs() < 1e-9 {
                to
            } else {
                from + i as f64 * step
            }
        })
        .collect())
}

pub fn scan(args: &ScanArgs) -> Result<ScanOutput, CliError> {
    settings_count(args.n)?;
    let points = grid(args.from, args.to, args.step)?;
    for &mu in &points {
        werner_parameter(mu)?;
    }
    let scheme = scheme_axes::<f64>(args.n)?;
    let rows = points
        .par_iter()
        .map(|&mu| -> Result<ScanRow, CliError> {
            let p = werner_parameter(mu)?;
            let rho = werner(p);
            let s = honest_steering(&rho, &scheme)?;
            let b = chsh_max(&rho)?;
            Ok(ScanRow {
                mu,
                s_value: s.s_value,
                bound: s.bound,
                steering_violated: s.violated,
                b_max: b.b_value,
                chsh_violated: b.violated,
                tangle: tangle(&rho)?,
                linear_entropy: linear_entropy(&rho),
                regime: classify(p),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScanOutput { n: args.n, rows })
}

fn pipeline_row(t: &mut Table, index: usize, r: &PipelineReport) {
    t.push(vec![
        index.into(),
        r.seed.into(),
        r.mu.into(),
        r.n.into(),
        r.sampled.steering.value.into(),
        r.sampled.steering.std_error.into(),
        r.sampled.steering_bootstrap.std_error.into(),
        r.exact.bound.into(),
        r.sampled.steering_violated.into(),
        r.sampled.chsh.value.into(),
        r.sampled.chsh.std_error.into(),
        r.sampled.chsh_violated.into(),
        r.correction.mu_hat.into(),
        r.tomography.fidelity_to_target.into(),
    ]);
}

const PIPELINE_HEADER: [&str; 14] = [
    "run",
    "seed",
    "mu",
    "n",
    "s_hat",
    "s_std_error",
    "s_bootstrap_std_error",
    "bound",
    "steering_violated",
    "b_hat",
    "b_std_error",
    "chsh_violated",
    "mu_hat",
    "tomography_fidelity",
];

impl Report for PipelineReport {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&PIPELINE_HEADER);
        pipeline_row(&mut t, 0, self);
        t
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BatchSummary {
    pub mean_s_hat: f64,
    pub steering_violation_rate: f64,
    pub chsh_violation_rate: f64,
    /// Fraction of runs with `|Ŝ_n − S_n| ≤ 3 σ̂`.
    pub within_three_sigma: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct McBatch {
    pub mu: f64,
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    pub repeats: usize,
    pub exact: ExactSummary,
    pub summary: BatchSummary,
    pub runs: Vec<PipelineReport>,
}

impl Report for McBatch {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&PIPELINE_HEADER);
        for (i, r) in self.runs.iter().enumerate() {
            pipeline_row(&mut t, i, r);
        }
        t
    }
}

pub enum McOutput {
    Single(Box<PipelineReport>),
    Batch(McBatch),
}

impl Report for McOutput {
    fn json(&self) -> serde_json::Result<String> {
        match self {
            McOutput::Single(r) => r.json(),
            McOutput::Batch(b) => b.json(),
        }
    }

    fn table(&self) -> Table {
        match self {
            McOutput::Single(r) => r.table(),
            McOutput::Batch(b) => b.table(),
        }
    }
}

fn check_shots(shots: u64) -> Result<(), CliError> {
    if shots == 0 {
        return Err(CliError::Validation("--shots must be at least 1".into()));
    }
    Ok(())
}

pub fn mc(args: &McArgs, seed: u64) -> Result<McOutput, CliError> {
    werner_parameter(args.mu)?;
    settings_count(args.n)?;
    check_shots(args.shots)?;
    if args.repeats == 0 {
        return Err(CliError::Validation("--repeats must be at least 1".into()));
    }
    if args.resamples < 2 {
        return Err(CliError::Validation(
            "--resamples must be at least 2".into(),
        ));
    }
    let config = |seed| PipelineConfig {
        bootstrap_resamples: args.resamples,
        correction_restarts: args.restarts,
        ..PipelineConfig::new(args.mu, args.n, args.shots, seed)
    };
    if args.repeats == 1 {
        return Ok(McOutput::Single(Box::new(full_pipeline(&config(seed))?)));
    }
    let runs = (0..args.repeats as u64)
        .into_par_iter()
        .map(|i| full_pipeline(&config(derive_seed(seed, i))))
        .collect::<Result<Vec<_>, _>>()?;
    let m = runs.len() as f64;
    let exact = runs[0].exact.clone();
    let fraction =
        |f: &dyn Fn(&PipelineReport) -> bool| runs.iter().filter(|r| f(r)).count() as f64 / m;
    let summary = BatchSummary {
        mean_s_hat: runs.iter().map(|r| r.sampled.steering.value).sum::<f64>() / m,
        steering_violation_rate: fraction(&|r| r.sampled.steering_violated),
        chsh_violation_rate: fraction(&|r| r.sampled.chsh_violated),
        within_three_sigma: fraction(&|r| {
            (r.sampled.steering.value - r.exact.s_value).abs() <= 3.0 * r.sampled.steering.std_error
        }),
    };
    Ok(McOutput::Batch(McBatch {
        mu: args.mu,
        n: args.n,
        shots: args.shots,
        seed,
        repeats: args.repeats,
        exact,
        summary,
        runs,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TomoOutput {
    pub mu: f64,
    pub source: String,
    pub shots: u64,
    pub seed: u64,
    pub rho_hat: Vec<[f64; 2]>,
    pub fidelity_to_target: f64,
    pub tangle: f64,
    /// Bootstrap error; absent when `--resamples 0`.
    pub tangle_std_error: Option<f64>,
    pub linear_entropy: f64,
    pub linear_entropy_std_error: Option<f64>,
    pub true_tangle: f64,
    pub true_linear_entropy: f64,
    pub iterations: usize,
    pub log_likelihood: f64,
    pub resamples: usize,
}

impl Report for TomoOutput {
    fn json(&self) -> serde_json::Result<String> {
        crate::output::to_json(self)
    }

    fn table(&self) -> Table {
        let mut t = Table::new(&["quantity", "value"]);
        let scalars = [
            ("fidelity_to_target", self.fidelity_to_target),
            ("tangle", self.tangle),
            (
                "tangle_std_error",
                self.tangle_std_error.unwrap_or(f64::NAN),
            ),
            ("linear_entropy", self.linear_entropy),
            (
                "linear_entropy_std_error",
                self.linear_entropy_std_error.unwrap_or(f64::NAN),
            ),
            ("true_tangle", self.true_tangle),
            ("true_linear_entropy", self.true_linear_entropy),
            ("log_likelihood", self.log_likelihood),
        ];
        for (name, v) in scalars {
            t.push(vec![name.into(), v.into()]);
        }
        for (idx, [re, im]) in self.rho_hat.iter().enumerate() {
            let (i, j) = (idx / 4, idx % 4);
            t.push(vec![format!("rho_{i}{j}_re").into(), (*re).into()]);
            t.push(vec![format!("rho_{i}{j}_im").into(), (*im).into()]);
        }
        t
    }
}

pub fn tomo(args: &TomoArgs, seed: u64) -> Result<TomoOutput, CliError> {
    let mu = werner_parameter(args.mu)?;
    check_shots(args.shots)?;
    if args.resamples == 1 {
        return Err(CliError::Validation(
            "--resamples must be 0 or at least 2".into(),
        ));
    }
    let (target, source) = state_for(mu, args.prepared)?;
    let table = sample_counts(
        &target,
        &pauli_tomography_settings(),
        args.shots,
        derive_seed(seed, TOMOGRAPHY_STREAM),
    )?;
    let result = tomography(&table)?;
    let (tangle_err, entropy_err) = if args.resamples >= 2 {
        let (t, l) = bootstrap_tomography(
            &table,
            args.resamples,
            derive_seed(seed, BOOTSTRAP_STREAM),
            TomographyOptions::default(),
        )?;
        (Some(t.std_error), Some(l.std_error))
    } else {
        (None, None)
    };
    Ok(TomoOutput {
        mu: args.mu,
        source: source.into(),
        shots: args.shots,
        seed,
        rho_hat: matrix_entries(result.rho.matrix()),
        fidelity_to_target: fidelity(&result.rho, &target)?,
        tangle: tangle(&result.rho)?,
        tangle_std_error: tangle_err,
        linear_entropy: linear_entropy(&result.rho),
        linear_entropy_std_error: entropy_err,
        true_tangle: tangle(&target)?,
        true_linear_entropy: linear_entropy(&target),
        iterations: result.iterations,
        log_likelihood: result.log_likelihood,
        resamples: args.resamples,
    })
}
