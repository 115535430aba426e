//! The steering bound `C_n`: the largest steering parameter a
//! local-hidden-state Alice can reach against a given set of axes.
//!
//! `C_n = max_A λ_max((1/n) Σ_k A_k u_k·σ)` over sign vectors `A ∈ {±1}^n`.
//! Because `λ_max(a·σ) = |a|` for any real vector `a`, the eigenvalue problem
//! collapses to maximizing `|Σ_k A_k u_k| / n`, which is searched
//! exhaustively. The eigenvalue form is kept in [`eigenvalue_objective`] as an
//! independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Figure, MeasurementScheme};
use crate::linalg::{bloch_operator, eig_hermitian, BlochVector, ComplexMatrix};
use crate::protocol::{cheat_steering, LhsEnsemble};
use crate::scalar::{lit, tol, Real};

/// Largest setting count the exhaustive search accepts.
pub const MAX_SEARCH_SETTINGS: usize = 24;

/// Relative tolerance for treating two sign vectors as joint maximizers.
pub const TIE_TOL: f64 = 1e-12;

/// Alice's declared outcomes, one per setting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::domain("sign vector entries must be +1 or -1"));
        }
        Ok(Self(signs))
    }

    /// Bit `k` of `mask` set ⇒ `A_{k+1} = -1`; `A_0` is always `+1`.
    fn from_mask(n: usize, mask: u32) -> Self {
        let mut s = Vec::with_capacity(n);
        s.push(1);
        for k in 1..n {
            s.push(if mask & (1 << (k - 1)) != 0 { -1 } else { 1 });
        }
        Self(s)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// `Σ_k A_k u_k`.
    pub fn combine<T: Real>(&self, axes: &[BlochVector<T>]) -> BlochVector<T> {
        self.0.iter().zip(axes).fold(
            BlochVector::zero(),
            |acc, (&s, u)| {
                if s > 0 {
                    acc + *u
                } else {
                    acc - *u
                }
            },
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    BruteForce,
    Analytic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringBound<T> {
    pub n: usize,
    pub value: T,
    /// Every sign vector reaching `value`; empty for analytic bounds.
    pub maximizers: Vec<SignVector>,
    pub method: BoundMethod,
}

impl<T: Real> SteeringBound<T> {
    pub fn validate(&self) -> Result<()> {
        let n = T::from_usize(self.n).unwrap();
        if !(self.value >= n.recip() - tol(1e-12) && self.value <= T::one() + tol(1e-12)) {
            return Err(Error::domain(format!(
                "bound {} outside [1/n, 1]",
                self.value
            )));
        }
        if self.method == BoundMethod::BruteForce {
            if self.maximizers.is_empty() || !self.maximizers.len().is_multiple_of(2) {
                return Err(Error::domain(
                    "brute-force bound needs an even, nonempty maximizer list",
                ));
            }
            if self.maximizers.iter().any(|m| m.len() != self.n) {
                return Err(Error::domain("maximizer length differs from n"));
            }
        }
        Ok(())
    }
}

/// Exhaustive search for `C_n` over all sign vectors.
pub fn steering_bound<T: Real>(scheme: &MeasurementScheme<T>) -> Result<SteeringBound<T>> {
    let n = scheme.n;
    if n > MAX_SEARCH_SETTINGS {
        return Err(Error::domain(format!(
            "exhaustive search is limited to {MAX_SEARCH_SETTINGS} settings, got {n}"
        )));
    }
    if n == 0 || scheme.axes.len() != n {
        return Err(Error::domain("scheme has no axes or an inconsistent count"));
    }
    if let Some((j, k)) = scheme.parallel_pair() {
        return Err(Error::domain(format!(
            "degenerate scheme: axes {j} and {k} are parallel or antiparallel"
        )));
    }

    let inv_n = T::from_usize(n).unwrap().recip();
    let rel = lit::<T>(TIE_TOL);
    let mut best = T::neg_infinity();
    let mut masks: Vec<u32> = Vec::new();
    for mask in 0..(1u32 << (n - 1)) {
        let mut sum = scheme.axes[0];
        for (k, u) in scheme.axes.iter().enumerate().skip(1) {
            if mask & (1 << (k - 1)) != 0 {
                sum = sum - *u;
            } else {
                sum = sum + *u;
            }
        }
        let value = sum.norm() * inv_n;
        if masks.is_empty() || value > best + rel * best.abs() {
            masks.clear();
            best = value;
            masks.push(mask);
        } else if (value - best).abs() <= rel * best.abs() {
            masks.push(mask);
        }
    }

    let mut maximizers = Vec::with_capacity(2 * masks.len());
    for mask in masks {
        let sv = SignVector::from_mask(n, mask);
        maximizers.push(sv.negated());
        maximizers.push(sv);
    }
    Ok(SteeringBound {
        n,
        value: best,
        maximizers,
        method: BoundMethod::BruteForce,
    })
}

/// Closed-form `C_n` for the built-in schemes.
///
/// For the icosahedron and dodecahedron this evaluates
/// `1 − (5L₆/12)·√(4 − sec²(3θ/2))` and
/// `1 − (1/10)(1 + tan 2θ / sin θ)·√(9L₁₀² − 4)`, with `θ = π/5` and the edge
/// lengths `L₆ = 4/√(10 + 2√5)`, `L₁₀ = 4/(√15 + √3)` of the solids inscribed
/// in the unit sphere.
pub fn analytic_bound<T: Real>(n: usize) -> Result<T> {
    let figure = Figure::from_settings(n)?;
    let one = T::one();
    let five = lit::<T>(5.0);
    Ok(match figure {
        Figure::Square => T::FRAC_1_SQRT_2(),
        Figure::Octahedron | Figure::Cube => lit::<T>(3.0).sqrt().recip(),
        Figure::Icosahedron => {
            let theta = T::PI() / five;
            let edge = lit::<T>(4.0) / (lit::<T>(10.0) + lit::<T>(2.0) * five.sqrt()).sqrt();
            let sec = (lit::<T>(1.5) * theta).cos().recip();
            one - five * edge / lit(12.0) * (lit::<T>(4.0) - sec * sec).sqrt()
        }
        Figure::Dodecahedron => {
            let theta = T::PI() / five;
            let edge = lit::<T>(4.0) / (lit::<T>(15.0).sqrt() + lit::<T>(3.0).sqrt());
            let slope = one + (theta + theta).tan() / theta.sin();
            one - slope / lit(10.0) * (lit::<T>(9.0) * edge * edge - lit(4.0)).sqrt()
        }
    })
}

pub fn analytic_steering_bound<T: Real>(n: usize) -> Result<SteeringBound<T>> {
    Ok(SteeringBound {
        n,
        value: analytic_bound(n)?,
        maximizers: Vec::new(),
        method: BoundMethod::Analytic,
    })
}

/// `λ_max((1/n) Σ_k A_k u_k·σ)` computed from the operator spectrum, without
/// the norm identity.
pub fn eigenvalue_objective<T: Real>(
    scheme: &MeasurementScheme<T>,
    signs: &SignVector,
) -> Result<T> {
    if signs.len() != scheme.n {
        return Err(Error::domain(
            "sign vector length differs from the number of settings",
        ));
    }
    let inv_n = T::from_usize(scheme.n).unwrap().recip();
    let mut op = ComplexMatrix::zeros(2);
    for (&s, u) in signs.signs().iter().zip(&scheme.axes) {
        let term = bloch_operator(u);
        op = if s > 0 { &op + &term } else { &op - &term };
    }
    let values = eig_hermitian(&op.scale(inv_n))?;
    Ok(values[1])
}

/// `S_n(ensemble) − C_n`: zero for an optimal local-hidden-state ensemble,
/// never positive.
pub fn verify_tightness<T: Real>(
    scheme: &MeasurementScheme<T>,
    ensemble: &LhsEnsemble<T>,
) -> Result<T> {
    let achieved = cheat_steering(ensemble, scheme)?;
    let bound = steering_bound(scheme)?;
    Ok(achieved.s_value - bound.value)
}
