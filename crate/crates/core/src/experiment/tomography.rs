use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::poisson;
use super::{CountTable, Estimate, EstimateMethod, OutcomeData, Setting, OUTCOME_SIGNS};
use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, pauli, pauli_along, BlochVector, ComplexMatrix, DensityMatrix};
use crate::seeds::derive_seed;
use crate::states::{linear_entropy, tangle};

/// Number of real parameters of a two-qubit state.
const UNKNOWNS: usize = 15;
/// Relative pivot threshold below which the design is rank deficient.
const RANK_TOL: f64 = 1e-9;
/// Floor on model probabilities inside the likelihood.
const PROBABILITY_FLOOR: f64 = 1e-15;
/// Weight of `I/4` mixed into a clipped linear estimate before iterating.
const START_MIXING: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TomographyOptions {
    pub max_iterations: usize,
    /// Stop when the mean log-likelihood per count changes by less than this.
    pub loglik_tol: f64,
}

impl Default for TomographyOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            loglik_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TomographyResult {
    pub rho: DensityMatrix<f64>,
    /// Unconstrained linear-inversion estimate (may have negative eigenvalues).
    pub linear: ComplexMatrix<f64>,
    pub iterations: usize,
    /// Mean log-likelihood per count at the returned state.
    pub log_likelihood: f64,
}

/// The nine Pauli-pair settings `(σ_i, σ_j)`, `i, j ∈ {x, y, z}`. With four
/// outcomes each they give the 36 eigenstate-pair projections.
pub fn pauli_tomography_settings() -> Vec<Setting> {
    let axes = [
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(0.0, 1.0, 0.0),
        BlochVector::new(0.0, 0.0, 1.0),
    ];
    let mut out = Vec::with_capacity(9);
    for a in axes {
        for b in axes {
            out.push(Setting::new(a, b));
        }
    }
    out
}

fn design_rows(setting: &Setting) -> [[f64; UNKNOWNS]; 3] {
    let a = setting.alice.to_array();
    let b = setting.bob.to_array();
    let mut rows = [[0.0; UNKNOWNS]; 3];
    rows[0][..3].copy_from_slice(&a);
    rows[1][3..6].copy_from_slice(&b);
    for i in 0..3 {
        for j in 0..3 {
            rows[2][6 + 3 * i + j] = a[i] * b[j];
        }
    }
    rows
}

fn normal_matrix(settings: &[Setting]) -> [[f64; UNKNOWNS]; UNKNOWNS] {
    let mut m = [[0.0; UNKNOWNS]; UNKNOWNS];
    for s in settings {
        for row in design_rows(s) {
            for i in 0..UNKNOWNS {
                for j in 0..UNKNOWNS {
                    m[i][j] += row[i] * row[j];
                }
            }
        }
    }
    m
}

/// Gaussian elimination with partial pivoting; `None` if singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: [[f64; UNKNOWNS]; UNKNOWNS], mut rhs: [f64; UNKNOWNS]) -> Option<[f64; UNKNOWNS]> {
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..UNKNOWNS {
        let pivot = (col..UNKNOWNS).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= RANK_TOL * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..UNKNOWNS {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for k in col..UNKNOWNS {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = [0.0; UNKNOWNS];
    for row in (0..UNKNOWNS).rev() {
        let tail: f64 = (row + 1..UNKNOWNS).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

/// Whether the settings determine all 15 Pauli coordinates of a two-qubit
/// state.
pub fn is_informationally_complete(settings: &[Setting]) -> bool {
    solve(normal_matrix(settings), [0.0; UNKNOWNS]).is_some()
}

fn linear_inversion(data: &impl OutcomeData) -> Result<ComplexMatrix<f64>> {
    let settings = data.settings();
    let mut rhs = [0.0; UNKNOWNS];
    for (k, s) in settings.iter().enumerate() {
        let w = data.weights(k);
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::Estimation(format!("setting {k} recorded no counts")));
        }
        let mut moments = [0.0; 3];
        for (wo, &(a, b)) in w.iter().zip(&OUTCOME_SIGNS) {
            moments[0] += a * wo / total;
            moments[1] += b * wo / total;
            moments[2] += a * b * wo / total;
        }
        for (row, m) in design_rows(s).iter().zip(moments) {
            for i in 0..UNKNOWNS {
                rhs[i] += row[i] * m;
            }
        }
    }
    let x = solve(normal_matrix(settings), rhs)
        .ok_or_else(|| Error::domain("measurement settings are not informationally complete"))?;

    let mut rho = ComplexMatrix::identity(4);
    let id = ComplexMatrix::identity(2);
    for i in 0..3 {
        rho = &rho + &kron(&pauli(i + 1), &id)?.scale(x[i]);
        rho = &rho + &kron(&id, &pauli(i + 1))?.scale(x[3 + i]);
        for j in 0..3 {
            rho = &rho + &kron(&pauli(i + 1), &pauli(j + 1))?.scale(x[6 + 3 * i + j]);
        }
    }
    Ok(rho.scale(0.25))
}

/// Clips negative eigenvalues to zero and rescales to unit trace.
fn clip_to_state(m: &ComplexMatrix<f64>) -> Result<ComplexMatrix<f64>> {
    let eig = eigh(&m.hermitian_part())?;
    let total: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        return Ok(ComplexMatrix::identity(4).scale(0.25));
    }
    Ok(eig.map_spectrum(|v| v.max(0.0) / total).hermitian_part())
}

struct Likelihood {
    /// `(projector, observed frequency, setting weight)` per outcome.
    terms: Vec<(ComplexMatrix<f64>, f64, f64)>,
}

impl Likelihood {
    fn new(data: &impl OutcomeData) -> Result<Self> {
        let n = data.settings().len();
        let grand: f64 = (0..n).map(|k| data.weights(k).iter().sum::<f64>()).sum();
        let id = ComplexMatrix::identity(2);
        let mut terms = Vec::with_capacity(4 * n);
        for (k, s) in data.settings().iter().enumerate() {
            let w = data.weights(k);
            let total: f64 = w.iter().sum();
            let sa = pauli_along(&s.alice)?;
            let sb = pauli_along(&s.bob)?;
            for (wo, &(a, b)) in w.iter().zip(&OUTCOME_SIGNS) {
                let pa = (&id + &sa.scale(a)).scale(0.5);
                let pb = (&id + &sb.scale(b)).scale(0.5);
                terms.push((kron(&pa, &pb)?, wo / total, total / grand));
            }
        }
        Ok(Self { terms })
    }

    /// Mean log-likelihood per count and the `R` operator at `rho`.
    fn evaluate(&self, rho: &ComplexMatrix<f64>) -> (f64, ComplexMatrix<f64>) {
        let mut loglik = 0.0;
        let mut r = ComplexMatrix::zeros(4);
        for (proj, f, weight) in &self.terms {
            let p = rho.trace_product(proj).re.max(PROBABILITY_FLOOR);
            if *f > 0.0 {
                loglik += weight * f * p.ln();
                r = &r + &proj.scale(weight * f / p);
            }
        }
        (loglik, r)
    }
}

/// Linear inversion followed by RρR maximum-likelihood refinement.
pub fn tomography(data: &impl OutcomeData) -> Result<TomographyResult> {
    tomography_with(data, TomographyOptions::default())
}

pub fn tomography_with(
    data: &impl OutcomeData,
    options: TomographyOptions,
) -> Result<TomographyResult> {
    if data.settings().is_empty() {
        return Err(Error::domain("no measurement settings given"));
    }
    let linear = linear_inversion(data)?;
    let min_eig = eigh(&linear.hermitian_part())?.values[0];
    let mut rho = if min_eig >= 0.0 {
        linear.hermitian_part()
    } else {
        let clipped = clip_to_state(&linear)?;
        &clipped.scale(1.0 - START_MIXING) + &ComplexMatrix::identity(4).scale(START_MIXING / 4.0)
    };

    let likelihood = Likelihood::new(data)?;
    let (mut loglik, mut r) = likelihood.evaluate(&rho);
    let mut iterations = 0;
    while iterations < options.max_iterations {
        let next = (&(&r * &rho) * &r).hermitian_part();
        let trace = next.trace().re;
        if !(trace > 0.0 && trace.is_finite()) {
            return Err(Error::Internal(
                "likelihood iteration lost normalization".into(),
            ));
        }
        rho = next.scale(1.0 / trace);
        iterations += 1;
        let (next_loglik, next_r) = likelihood.evaluate(&rho);
        let change = (next_loglik - loglik).abs();
        loglik = next_loglik;
        r = next_r;
        if change < options.loglik_tol {
            break;
        }
    }
    let rho = clip_to_state(&rho)?;
    Ok(TomographyResult {
        rho: DensityMatrix::from_trusted(rho),
        linear,
        iterations,
        log_likelihood: loglik,
    })
}

/// Parametric-bootstrap error bars of `(tangle, linear_entropy)` of the
/// reconstructed state: counts are redrawn as Poisson around the observed
/// values and re-reconstructed. Central values come from `table` itself.
pub fn bootstrap_tomography(
    table: &CountTable,
    resamples: usize,
    seed: u64,
    options: TomographyOptions,
) -> Result<(Estimate, Estimate)> {
    if resamples < 2 {
        return Err(Error::domain("bootstrap needs at least two resamples"));
    }
    let centre = tomography_with(table, options)?.rho;
    let mut draws = Vec::with_capacity(resamples);
    for r in 0..resamples as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r));
        let counts = table
            .counts
            .iter()
            .map(|c| c.map(|x| poisson(&mut rng, x as f64)))
            .collect();
        let resampled = CountTable::new(table.settings.clone(), counts, table.shots_target)?;
        let rho = tomography_with(&resampled, options)?.rho;
        draws.push((tangle(&rho)?, linear_entropy(&rho)));
    }
    let m = resamples as f64;
    let spread = |pick: fn(&(f64, f64)) -> f64| {
        let mean = draws.iter().map(pick).sum::<f64>() / m;
        (draws.iter().map(|d| (pick(d) - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    };
    let method = EstimateMethod::MonteCarlo { resamples };
    Ok((
        Estimate {
            value: tangle(&centre)?,
            std_error: spread(|d| d.0),
            method,
        },
        Estimate {
            value: linear_entropy(&centre),
            std_error: spread(|d| d.1),
            method,
        },
    ))
}

/// `ρ` as 16 `(re, im)` pairs in row-major order.
pub fn matrix_entries(rho: &ComplexMatrix<f64>) -> Vec<[f64; 2]> {
    rho.entries()
        .iter()
        .map(|z: &Complex<f64>| [z.re, z.im])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographySummary {
    pub rho_hat: Vec<[f64; 2]>,
    pub fidelity_to_target: f64,
    pub tangle: f64,
    pub linear_entropy: f64,
    pub iterations: usize,
}
