//! Two-qubit state models: the Werner family, the gate-plus-depolarizer
//! preparation chain, entanglement and mixedness measures, regime
//! classification, and the local-unitary correction that maps a
//! Werner-like state back onto the Werner family.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::analytic_bound;
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, eigh, hadamard, kron, pauli_y, unitary_from_euler, ComplexMatrix, DensityMatrix,
    Subsystem,
};
use crate::optimize::{brent_max, nelder_mead, SimplexOptions};
use crate::scalar::{lit, tol, Real};

/// Largest μ below which Werner states violate no Bell inequality at all.
/// Quoted, not derived; reported as an annotation only.
pub const BELL_LOCAL_BELOW: f64 = 0.6595;

/// Singlet weight `μ ∈ [0, 1]` of a Werner state.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WernerParameter<T>(T);

impl<T: Real> WernerParameter<T> {
    pub fn new(mu: T) -> Result<Self> {
        if mu >= T::zero() && mu <= T::one() {
            Ok(Self(mu))
        } else {
            Err(Error::domain(format!(
                "Werner parameter must lie in [0, 1], got {mu}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

/// `|Ψ⁻⟩ = (|01⟩ − |10⟩)/√2` in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn singlet_ket<T: Real>() -> [Complex<T>; 4] {
    let h = T::FRAC_1_SQRT_2();
    let z = Complex::new(T::zero(), T::zero());
    [
        z,
        Complex::new(h, T::zero()),
        Complex::new(-h, T::zero()),
        z,
    ]
}

pub fn singlet_projector<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::outer(&singlet_ket::<T>()).expect("4-dimensional ket")
}

/// `W_μ = μ |Ψ⁻⟩⟨Ψ⁻| + (1 − μ) I/4`.
pub fn werner<T: Real>(mu: WernerParameter<T>) -> DensityMatrix<T> {
    let mu = mu.get();
    let quarter = (T::one() - mu) * lit(0.25);
    let m = &singlet_projector::<T>().scale(mu) + &ComplexMatrix::identity(4).scale(quarter);
    DensityMatrix::from_trusted(m)
}

/// Ideal output of the entangling gate: `(H ⊗ I)|Ψ⁻⟩`.
pub fn prepare_via_gate<T: Real>() -> DensityMatrix<T> {
    let h_i = kron(&hadamard::<T>(), &ComplexMatrix::identity(2)).expect("2x2 factors");
    DensityMatrix::pure(&singlet_ket::<T>())
        .expect("normalized ket")
        .evolve(&h_i)
}

/// Depolarizing channel of strength `q` on qubit 1:
/// `ρ ↦ (1 − q) ρ + q · I/2 ⊗ Tr₁ ρ`.
pub fn depolarize_one_sided<T: Real>(rho: &DensityMatrix<T>, q: T) -> Result<DensityMatrix<T>> {
    if !(q >= T::zero() && q <= T::one()) {
        return Err(Error::domain(format!(
            "depolarizing strength must lie in [0, 1], got {q}"
        )));
    }
    if rho.dim() != 4 {
        return Err(Error::domain(
            "one-sided depolarization needs a two-qubit state",
        ));
    }
    let bob = rho.partial_trace(Subsystem::Second)?;
    let noise = kron(&ComplexMatrix::identity(2).scale(lit(0.5)), bob.matrix())?;
    let m = &rho.matrix().scale(T::one() - q) + &noise.scale(q);
    Ok(DensityMatrix::from_trusted(m))
}

/// `(Y ⊗ Y) ρ* (Y ⊗ Y)`.
pub fn spin_flip<T: Real>(rho: &DensityMatrix<T>) -> Result<ComplexMatrix<T>> {
    if rho.dim() != 4 {
        return Err(Error::domain("spin flip needs a two-qubit state"));
    }
    let yy = kron(&pauli_y::<T>(), &pauli_y())?;
    Ok(&(&yy * &rho.matrix().conj()) * &yy)
}

/// Wootters concurrence.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let flipped = spin_flip(rho)?;
    let sqrt_rho = eigh(rho.matrix())?.map_spectrum(|x| x.max(T::zero()).sqrt());
    let r = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let mut lambdas: Vec<T> = eig_hermitian(&r)?
        .into_iter()
        .map(|x| x.max(T::zero()).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()))
}

/// Squared concurrence.
pub fn tangle<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let c = concurrence(rho)?;
    Ok(c * c)
}

/// Normalized linear entropy `d/(d−1) · (1 − Tr ρ²)`: 0 for pure states,
/// 1 for the maximally mixed state.
pub fn linear_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = T::from_usize(rho.dim()).unwrap();
    let s = d / (d - T::one()) * (T::one() - rho.purity());
    s.max(T::zero()).min(T::one())
}

/// `μ` of the Werner state with the same singlet fraction:
/// `(4 ⟨Ψ⁻|ρ|Ψ⁻⟩ − 1)/3`. Exact on the Werner family.
pub fn singlet_fraction_mu<T: Real>(rho: &DensityMatrix<T>) -> T {
    let f = rho.expectation(&singlet_projector());
    (lit::<T>(4.0) * f - T::one()) / lit(3.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Separable,
    EntangledUnsteerable,
    SteerableMany,
    SteerableN6,
    SteerableN3,
    ChshViolating,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Separable => "separable",
            Regime::EntangledUnsteerable => "entangled_unsteerable",
            Regime::SteerableMany => "steerable_many",
            Regime::SteerableN6 => "steerable_n6",
            Regime::SteerableN3 => "steerable_n3",
            Regime::ChshViolating => "chsh_violating",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Exclusive lower edges of the Werner-state regimes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds<T> {
    /// 1/3
    pub entangled: T,
    /// 1/2, the infinite-setting steering threshold
    pub steerable: T,
    /// C₆
    pub steerable_n6: T,
    /// C₃ = 1/√3
    pub steerable_n3: T,
    /// 1/√2
    pub chsh: T,
}

impl<T: Real> RegimeThresholds<T> {
    pub fn standard() -> Self {
        Self {
            entangled: lit::<T>(3.0).recip(),
            steerable: lit(0.5),
            steerable_n6: analytic_bound(6).expect("icosahedral bound"),
            steerable_n3: analytic_bound(3).expect("octahedral bound"),
            chsh: analytic_bound(2).expect("square bound"),
        }
    }

    pub fn classify(&self, mu: T) -> Regime {
        if mu > self.chsh {
            Regime::ChshViolating
        } else if mu > self.steerable_n3 {
            Regime::SteerableN3
        } else if mu > self.steerable_n6 {
            Regime::SteerableN6
        } else if mu > self.steerable {
            Regime::SteerableMany
        } else if mu > self.entangled {
            Regime::EntangledUnsteerable
        } else {
            Regime::Separable
        }
    }
}

/// Regime of the Werner state `W_μ`; thresholds are strict (`μ > …`).
pub fn classify<T: Real>(mu: WernerParameter<T>) -> Regime {
    RegimeThresholds::standard().classify(mu.get())
}

/// Whether `μ` is below the cited all-Bell-inequalities locality bound.
pub fn bell_local_certified<T: Real>(mu: WernerParameter<T>) -> bool {
    mu.get() < lit(BELL_LOCAL_BELOW)
}

/// Coordinates of a state in the tangle–entropy plane plus its regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateCharacter<T> {
    pub tangle: T,
    pub linear_entropy: T,
    pub mu_fit: T,
    pub regime: Regime,
    pub bell_local_certified: bool,
}

/// Characterizes `rho`, classifying by the supplied Werner parameter
/// (clamped to `[0, 1]`).
pub fn characterize<T: Real>(rho: &DensityMatrix<T>, mu_fit: T) -> Result<StateCharacter<T>> {
    let mu = WernerParameter::new(mu_fit.max(T::zero()).min(T::one()))?;
    Ok(StateCharacter {
        tangle: tangle(rho)?,
        linear_entropy: linear_entropy(rho),
        mu_fit,
        regime: classify(mu),
        bell_local_certified: bell_local_certified(mu),
    })
}

/// Best single-qubit unitary `Û` (acting on qubit 1) and Werner parameter
/// for a Werner-like state.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCorrection<T> {
    pub unitary: ComplexMatrix<T>,
    /// Euler angles `(α, β, γ)` of `Û = Rz(α) Ry(β) Rz(γ)`.
    pub angles: [T; 3],
    /// `1 − F((Û⊗I) ρ (Û⊗I)†, W_μ̂)` at the optimum.
    pub residual_cost: T,
    pub mu_hat: T,
}

#[derive(Clone, Copy, Debug)]
pub struct CorrectionOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for CorrectionOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0x5eed_cafe,
            max_iterations: 600,
        }
    }
}

/// Squared fidelity between `rho` and `W_μ`, using the closed-form square
/// root of the Werner state.
fn werner_fidelity<T: Real>(rho: &ComplexMatrix<T>, mu: T) -> T {
    let quarter = lit::<T>(0.25);
    let a = ((T::one() + lit::<T>(3.0) * mu) * quarter).sqrt();
    let b = ((T::one() - mu) * quarter).sqrt();
    let sqrt_w = &singlet_projector::<T>().scale(a - b) + &ComplexMatrix::identity(4).scale(b);
    let inner = (&(&sqrt_w * rho) * &sqrt_w).hermitian_part();
    let root: T = eig_hermitian(&inner)
        .map(|v| v.into_iter().map(|x| x.max(T::zero()).sqrt()).sum())
        .unwrap_or(T::zero());
    let root = root.min(T::one());
    root * root
}

/// `(μ̂, F)` maximizing the fidelity with the Werner family.
///
/// `√F(ρ, W_μ)` is concave in `μ` (root fidelity is jointly concave and
/// `W_μ` is affine), so a 1-D search over `[0, 1]` is enough.
pub fn best_werner_fit<T: Real>(rho: &ComplexMatrix<T>) -> (T, T) {
    let interior = werner_fit_to(rho, tol(1e-7));
    // The search never lands exactly on an endpoint.
    [T::zero(), T::one()]
        .into_iter()
        .map(|m| (m, werner_fidelity(rho, m)))
        .fold(interior, |best, c| if c.1 > best.1 { c } else { best })
}

fn werner_fit_to<T: Real>(rho: &ComplexMatrix<T>, mu_tol: T) -> (T, T) {
    brent_max(|m| werner_fidelity(rho, m), T::zero(), T::one(), mu_tol)
}

/// Searches for `Û` minimizing `1 − F((Û⊗I) ρ (Û⊗I)†, W_μ̂)`, with `μ̂`
/// re-fitted for every candidate `Û`.
pub fn find_local_correction<T: Real>(
    rho: &DensityMatrix<T>,
    options: CorrectionOptions,
) -> Result<LocalCorrection<T>> {
    if rho.dim() != 4 {
        return Err(Error::domain("local correction needs a two-qubit state"));
    }
    let identity = ComplexMatrix::identity(2);
    let cost = |angles: &[T]| -> T {
        let u = unitary_from_euler(angles[0], angles[1], angles[2]);
        let full = kron(&u, &identity).expect("2x2 factors");
        let rotated = rho.matrix().conjugate_by(&full);
        T::one() - werner_fit_to(&rotated, tol(1e-6)).1
    };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let simplex = SimplexOptions {
        step: lit(0.4),
        max_iterations: options.max_iterations,
        value_tol: tol(1e-10),
    };
    let two_pi = T::PI() + T::PI();
    let mut best: Option<(Vec<T>, T)> = None;
    for restart in 0..=options.restarts {
        let start: Vec<T> = if restart == 0 {
            vec![T::zero(); 3]
        } else {
            (0..3).map(|_| two_pi * lit(rng.gen::<f64>())).collect()
        };
        let (x, v) = nelder_mead(&cost, &start, simplex);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (angles, _) = best.expect("at least one restart");
    let unitary = unitary_from_euler(angles[0], angles[1], angles[2]);
    let rotated = rho.matrix().conjugate_by(&kron(&unitary, &identity)?);
    let (mu_hat, f) = best_werner_fit(&rotated);
    Ok(LocalCorrection {
        unitary,
        angles: [angles[0], angles[1], angles[2]],
        residual_cost: (T::one() - f).max(T::zero()),
        mu_hat,
    })
}
