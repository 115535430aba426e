//! The steering game and the Bell-CHSH comparison.
//!
//! Bob measures the Pauli observable along `u_k` for the setting `k` he
//! announces; Alice declares a bit `A_k ∈ {±1}`. The steering parameter is the
//! average correlation `S_n = (1/n) Σ_k ⟨A_k σ_k⟩`.
//!
//! An honest Alice holding half of an entangled state measures along `−u_k`
//! and reports her outcome. A dishonest Alice sends Bob a pure state drawn
//! from a local-hidden-state ensemble and announces the outcome Bob is more
//! likely to see.

use serde::{Deserialize, Serialize};

use crate::bounds::{steering_bound, SignVector};
use crate::error::{Error, Result};
use crate::geometry::{directions, scheme_axes, DirectionKind, MeasurementScheme};
use crate::linalg::{
    correlation_observable, kron, pauli, symmetric_eigen3, BlochVector, DensityMatrix,
};
use crate::scalar::{lit, tol, Real};

/// A steering value must clear the bound by more than this to count as a
/// violation; exact saturation is not a violation.
pub const VIOLATION_MARGIN: f64 = 1e-12;

/// Local-realist CHSH bound.
pub const CHSH_LOCAL_BOUND: f64 = 2.0;

/// How a dishonest Alice turns (state index, setting) into a declared bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseRule {
    /// `A = sign(v_j · u_k)`, with `+1` on exact ties.
    MoreLikelyOutcome,
    /// Explicit bits, one sign vector per state, indexed by setting.
    Table(Vec<SignVector>),
}

/// A dishonest Alice's complete strategy: which pure states she sends, how
/// often, and what she declares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhsEnsemble<T> {
    pub states: Vec<BlochVector<T>>,
    pub weights: Vec<T>,
    pub response_rule: ResponseRule,
}

impl<T: Real> LhsEnsemble<T> {
    pub fn new(
        states: Vec<BlochVector<T>>,
        weights: Vec<T>,
        response_rule: ResponseRule,
    ) -> Result<Self> {
        let e = Self {
            states,
            weights,
            response_rule,
        };
        e.validate()?;
        Ok(e)
    }

    /// Equal weights over `states`.
    pub fn uniform(states: Vec<BlochVector<T>>, response_rule: ResponseRule) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::domain("an ensemble needs at least one state"));
        }
        let w = T::from_usize(states.len()).unwrap().recip();
        let weights = vec![w; states.len()];
        Self::new(states, weights, response_rule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() || self.states.len() != self.weights.len() {
            return Err(Error::domain(
                "ensemble needs one weight per state and at least one state",
            ));
        }
        if self.states.iter().any(|v| !v.is_unit(tol(1e-12))) {
            return Err(Error::domain(
                "ensemble states must be pure (unit Bloch vectors)",
            ));
        }
        // Written so that NaN weights are rejected too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if self.weights.iter().any(|&w| !(w >= T::zero())) {
            return Err(Error::domain("ensemble weights must be non-negative"));
        }
        let total: T = self.weights.iter().copied().sum();
        if (total - T::one()).abs() > tol(1e-12) {
            return Err(Error::domain(format!(
                "ensemble weights sum to {total}, expected 1"
            )));
        }
        if let ResponseRule::Table(rows) = &self.response_rule {
            if rows.len() != self.states.len() {
                return Err(Error::domain("response table needs one row per state"));
            }
        }
        Ok(())
    }

    /// Alice's declared bit for state `j` when Bob announces setting `k`
    /// along `axis`.
    pub fn respond(&self, j: usize, k: usize, axis: &BlochVector<T>) -> Result<i8> {
        match &self.response_rule {
            ResponseRule::MoreLikelyOutcome => Ok(if self.states[j].dot(axis) >= T::zero() {
                1
            } else {
                -1
            }),
            ResponseRule::Table(rows) => rows[j].signs().get(k).copied().ok_or_else(|| {
                Error::domain(format!("response table has no entry for setting {k}"))
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// The ensemble kind that saturates `C_n` for the built-in schemes.
pub fn optimal_kind(n: usize) -> Result<DirectionKind> {
    match n {
        2..=4 => Ok(DirectionKind::Dual),
        6 | 10 => Ok(DirectionKind::Vertex),
        _ => Err(Error::domain(format!(
            "no built-in scheme with {n} settings"
        ))),
    }
}

/// Uniform ensemble over a figure's vertices or face centres, answering with
/// the more likely outcome.
pub fn make_ensemble<T: Real>(n: usize, kind: DirectionKind) -> Result<LhsEnsemble<T>> {
    let dirs = directions::<T>(n, kind)?;
    let ensemble = LhsEnsemble::uniform(dirs.directions, ResponseRule::MoreLikelyOutcome)?;
    if optimal_kind(n)? == kind {
        let scheme = scheme_axes::<T>(n)?;
        let tie = tol::<T>(1e-12);
        let tied = ensemble
            .states
            .iter()
            .any(|v| scheme.axes.iter().any(|u| v.dot(u).abs() <= tie));
        if tied {
            return Err(Error::Internal(format!(
                "optimal {kind:?} ensemble for n={n} has a state orthogonal to an axis"
            )));
        }
    }
    Ok(ensemble)
}

/// Steering value with its bound and per-setting correlations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport<T> {
    pub n: usize,
    pub s_value: T,
    pub bound: T,
    pub violated: bool,
    pub per_setting: Vec<T>,
}

impl<T: Real> SteeringReport<T> {
    pub fn from_correlations(per_setting: Vec<T>, bound: T) -> Result<Self> {
        if per_setting.is_empty() {
            return Err(Error::domain("no settings"));
        }
        let n = per_setting.len();
        let s_value = per_setting.iter().copied().sum::<T>() / T::from_usize(n).unwrap();
        Ok(Self {
            n,
            s_value,
            bound,
            violated: exceeds(s_value, bound),
            per_setting,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.per_setting.len() != self.n || self.n == 0 {
            return Err(Error::domain("per-setting list length differs from n"));
        }
        let mean = self.per_setting.iter().copied().sum::<T>() / T::from_usize(self.n).unwrap();
        if (mean - self.s_value).abs() > tol(1e-12) {
            return Err(Error::domain(
                "s_value is not the mean of the per-setting correlations",
            ));
        }
        if self.violated != exceeds(self.s_value, self.bound) {
            return Err(Error::domain(
                "violation flag inconsistent with s_value and bound",
            ));
        }
        Ok(())
    }
}

fn exceeds<T: Real>(value: T, bound: T) -> bool {
    value - bound > tol(VIOLATION_MARGIN)
}

/// `⟨σ(−u_k) ⊗ σ(u_k)⟩_ρ` for every axis.
pub fn honest_correlations<T: Real>(
    rho: &DensityMatrix<T>,
    scheme: &MeasurementScheme<T>,
) -> Result<Vec<T>> {
    if rho.dim() != 4 {
        return Err(Error::domain("honest steering needs a two-qubit state"));
    }
    scheme
        .axes
        .iter()
        .map(|u| Ok(rho.expectation(&correlation_observable(&-*u, u)?)))
        .collect()
}

/// `S_n` for an honest Alice who measures `−σ_k` on her half of `rho`.
pub fn honest_steering<T: Real>(
    rho: &DensityMatrix<T>,
    scheme: &MeasurementScheme<T>,
) -> Result<SteeringReport<T>> {
    let bound = steering_bound(scheme)?.value;
    SteeringReport::from_correlations(honest_correlations(rho, scheme)?, bound)
}

/// `S_n` achieved by a local-hidden-state ensemble:
/// `(1/n) Σ_k Σ_j w_j A_k(j) (v_j · u_k)`.
pub fn cheat_steering<T: Real>(
    ensemble: &LhsEnsemble<T>,
    scheme: &MeasurementScheme<T>,
) -> Result<SteeringReport<T>> {
    ensemble.validate()?;
    let bound = steering_bound(scheme)?.value;
    let mut per_setting = Vec::with_capacity(scheme.n);
    for (k, u) in scheme.axes.iter().enumerate() {
        let mut corr = T::zero();
        for (j, (v, &w)) in ensemble.states.iter().zip(&ensemble.weights).enumerate() {
            let a = T::from_i8(ensemble.respond(j, k, u)?).unwrap();
            corr = corr + w * a * v.dot(u);
        }
        per_setting.push(corr);
    }
    SteeringReport::from_correlations(per_setting, bound)
}

/// Alice and Bob axes for one CHSH experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings<T> {
    pub alice: [BlochVector<T>; 2],
    pub bob: [BlochVector<T>; 2],
}

/// Settings reaching `2√2` on the singlet for
/// `B = |E(a₁,b₁) + E(a₁,b₂) + E(a₂,b₁) − E(a₂,b₂)|`:
/// `a = (z, x)`, `b = (−(z+x)/√2, (x−z)/√2)`.
pub fn canonical_chsh_settings<T: Real>() -> ChshSettings<T> {
    let h = T::FRAC_1_SQRT_2();
    let (o, z) = (T::one(), T::zero());
    ChshSettings {
        alice: [BlochVector::new(z, z, o), BlochVector::new(o, z, z)],
        bob: [BlochVector::new(-h, z, -h), BlochVector::new(h, z, -h)],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshReport<T> {
    pub b_value: T,
    pub settings: ChshSettings<T>,
    pub violated: bool,
}

impl<T: Real> ChshReport<T> {
    fn new(b_value: T, settings: ChshSettings<T>) -> Self {
        Self {
            b_value,
            settings,
            violated: b_value - lit(CHSH_LOCAL_BOUND) > tol(VIOLATION_MARGIN),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tsirelson = lit::<T>(8.0).sqrt();
        if self.b_value.abs() > tsirelson + tol(1e-9) {
            return Err(Error::domain(format!(
                "CHSH value {} exceeds 2√2",
                self.b_value
            )));
        }
        let expect = self.b_value - lit(CHSH_LOCAL_BOUND) > tol(VIOLATION_MARGIN);
        if self.violated != expect {
            return Err(Error::domain(
                "CHSH violation flag inconsistent with b_value",
            ));
        }
        Ok(())
    }
}

/// `B = |E(a₁,b₁) + E(a₁,b₂) + E(a₂,b₁) − E(a₂,b₂)|`, `E(a,b) = ⟨σ_a ⊗ σ_b⟩_ρ`.
pub fn chsh_value<T: Real>(
    rho: &DensityMatrix<T>,
    settings: &ChshSettings<T>,
) -> Result<ChshReport<T>> {
    let e = |a: &BlochVector<T>, b: &BlochVector<T>| -> Result<T> {
        Ok(rho.expectation(&correlation_observable(a, b)?))
    };
    let [a1, a2] = &settings.alice;
    let [b1, b2] = &settings.bob;
    let b = (e(a1, b1)? + e(a1, b2)? + e(a2, b1)? - e(a2, b2)?).abs();
    Ok(ChshReport::new(b, *settings))
}

/// `T_ij = ⟨σ_i ⊗ σ_j⟩_ρ`, row = Alice's axis.
pub fn correlation_matrix<T: Real>(rho: &DensityMatrix<T>) -> Result<[[T; 3]; 3]> {
    if rho.dim() != 4 {
        return Err(Error::domain("correlation matrix needs a two-qubit state"));
    }
    let mut t = [[T::zero(); 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = rho.expectation(&kron(&pauli::<T>(i + 1), &pauli(j + 1))?);
        }
    }
    Ok(t)
}

/// Maximal CHSH value over all settings, `2√(m₁ + m₂)` with `m₁ ≥ m₂` the top
/// eigenvalues of `TᵀT`, together with settings that reach it.
pub fn chsh_max<T: Real>(rho: &DensityMatrix<T>) -> Result<ChshReport<T>> {
    let t = correlation_matrix(rho)?;
    let mut tt = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            tt[i][j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    let (values, vectors) = symmetric_eigen3(&tt);
    let (m1, m2) = (values[2].max(T::zero()), values[1].max(T::zero()));
    let column = |c: usize| BlochVector::new(vectors[0][c], vectors[1][c], vectors[2][c]);
    let (c1, c2) = (column(2), column(1));
    let apply = |v: &BlochVector<T>| {
        BlochVector::new(
            t[0][0] * v.x + t[0][1] * v.y + t[0][2] * v.z,
            t[1][0] * v.x + t[1][1] * v.y + t[1][2] * v.z,
            t[2][0] * v.x + t[2][1] * v.y + t[2][2] * v.z,
        )
    };
    let (tc1, tc2) = (apply(&c1), apply(&c2));
    let (n1, n2) = (tc1.norm(), tc2.norm());
    let total = (n1 * n1 + n2 * n2).sqrt();
    let tiny = tol::<T>(1e-14);
    let (cos, sin) = if total > tiny {
        (n1 / total, n2 / total)
    } else {
        (T::one(), T::zero())
    };
    let a1 = if n1 > tiny { tc1 * n1.recip() } else { c1 };
    let a2 = if n2 > tiny { tc2 * n2.recip() } else { c2 };
    let b1 = (c1 * cos + c2 * sin).normalized();
    let b2 = (c1 * cos - c2 * sin).normalized();
    let b_value = lit::<T>(2.0) * (m1 + m2).sqrt();
    Ok(ChshReport::new(
        b_value,
        ChshSettings {
            alice: [a1, a2],
            bob: [b1, b2],
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::verify_tightness;
    use crate::geometry::SUPPORTED_SETTINGS;
    use crate::states::{werner, WernerParameter};

    fn w(mu: f64) -> DensityMatrix<f64> {
        werner(WernerParameter::new(mu).unwrap())
    }

    #[test]
    fn honest_werner_value_is_mu() {
        for n in SUPPORTED_SETTINGS {
            let scheme = scheme_axes::<f64>(n).unwrap();
            for mu in [0.0, 0.35, 0.6, 1.0] {
                let r = honest_steering(&w(mu), &scheme).unwrap();
                assert!((r.s_value - mu).abs() < 1e-12);
                r.validate().unwrap();
            }
        }
    }

    #[test]
    fn product_state_shows_no_steering() {
        let rho = DensityMatrix::<f64>::maximally_mixed(4);
        let r = honest_steering(&rho, &scheme_axes(4).unwrap()).unwrap();
        assert!(r.s_value.abs() < 1e-15 && !r.violated);
    }

    #[test]
    fn ensemble_shapes() {
        let e = make_ensemble::<f64>(3, DirectionKind::Dual).unwrap();
        assert_eq!(e.len(), 8);
        assert!(e.weights.iter().all(|&w| (w - 0.125).abs() < 1e-15));
        let e = make_ensemble::<f64>(6, DirectionKind::Vertex).unwrap();
        assert_eq!(e.len(), 12);
        let e = make_ensemble::<f64>(2, DirectionKind::Dual).unwrap();
        assert_eq!(e.len(), 4);
        assert!(make_ensemble::<f64>(5, DirectionKind::Dual).is_err());
    }

    #[test]
    fn optimal_ensembles_saturate_the_bound() {
        for n in SUPPORTED_SETTINGS {
            let scheme = scheme_axes::<f64>(n).unwrap();
            let e = make_ensemble(n, optimal_kind(n).unwrap()).unwrap();
            let gap = verify_tightness(&scheme, &e).unwrap();
            assert!(gap.abs() < 1e-12, "n={n}: gap {gap}");
            assert!(!cheat_steering(&e, &scheme).unwrap().violated);
        }
    }

    #[test]
    fn vertex_ensemble_on_octahedron_gets_one_third() {
        let scheme = scheme_axes::<f64>(3).unwrap();
        let e = make_ensemble(3, DirectionKind::Vertex).unwrap();
        let r = cheat_steering(&e, &scheme).unwrap();
        assert!((r.s_value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dual_ensemble_is_suboptimal_for_icosahedron() {
        let scheme = scheme_axes::<f64>(6).unwrap();
        let gap =
            verify_tightness(&scheme, &make_ensemble(6, DirectionKind::Dual).unwrap()).unwrap();
        assert!(gap < -1e-3, "{gap}");
    }

    #[test]
    fn table_rule_reproduces_sign_rule() {
        let scheme = scheme_axes::<f64>(4).unwrap();
        let sign = make_ensemble::<f64>(4, DirectionKind::Dual).unwrap();
        let rows = sign
            .states
            .iter()
            .map(|v| {
                SignVector::new(
                    scheme
                        .axes
                        .iter()
                        .map(|u| if v.dot(u) >= 0.0 { 1 } else { -1 })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        let table = LhsEnsemble::new(
            sign.states.clone(),
            sign.weights.clone(),
            ResponseRule::Table(rows),
        )
        .unwrap();
        let a = cheat_steering(&sign, &scheme).unwrap();
        let b = cheat_steering(&table, &scheme).unwrap();
        assert!((a.s_value - b.s_value).abs() < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        let x = BlochVector::new(1.0, 0.0, 0.0);
        assert!(LhsEnsemble::new(vec![x], vec![0.5], ResponseRule::MoreLikelyOutcome).is_err());
        assert!(
            LhsEnsemble::new(vec![x * 0.5], vec![1.0], ResponseRule::MoreLikelyOutcome).is_err()
        );
        assert!(LhsEnsemble::new(
            vec![x, -x],
            vec![1.5, -0.5],
            ResponseRule::MoreLikelyOutcome
        )
        .is_err());
        assert!(LhsEnsemble::<f64>::uniform(vec![], ResponseRule::MoreLikelyOutcome).is_err());
    }

    #[test]
    fn chsh_canonical_settings() {
        let s = canonical_chsh_settings::<f64>();
        let singlet = chsh_value(&w(1.0), &s).unwrap();
        assert!((singlet.b_value - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(singlet.violated);
        for mu in [0.2, 0.5, 0.9] {
            let r = chsh_value(&w(mu), &s).unwrap();
            assert!((r.b_value - 2.0 * 2f64.sqrt() * mu).abs() < 1e-12);
        }
        let mixed = chsh_value(&DensityMatrix::maximally_mixed(4), &s).unwrap();
        assert!(mixed.b_value.abs() < 1e-15 && !mixed.violated);
    }

    #[test]
    fn chsh_max_for_werner_states() {
        let r = chsh_max(&w(0.8)).unwrap();
        assert!((r.b_value - 2.0 * 2f64.sqrt() * 0.8).abs() < 1e-9);
        assert!((r.b_value - 2.263).abs() < 1e-3 && r.violated);
        let edge = chsh_max(&w(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
        assert!((edge.b_value - 2.0).abs() < 1e-12 && !edge.violated);
        let low = chsh_max(&w(0.6)).unwrap();
        assert!((low.b_value - 1.697).abs() < 1e-3 && !low.violated);
        for r in [&r, &edge, &low] {
            r.validate().unwrap();
            let achieved = chsh_value(&w(r.b_value / (2.0 * 2f64.sqrt())), &r.settings).unwrap();
            assert!((achieved.b_value - r.b_value).abs() < 1e-9);
        }
    }

    #[test]
    fn chsh_max_settings_achieve_value_for_asymmetric_state() {
        let rho = crate::states::prepare_via_gate::<f64>();
        let r = chsh_max(&rho).unwrap();
        assert!((r.b_value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        let achieved = chsh_value(&rho, &r.settings).unwrap();
        assert!((achieved.b_value - r.b_value).abs() < 1e-9);
        let mixed = chsh_max(&DensityMatrix::<f64>::maximally_mixed(4)).unwrap();
        assert_eq!(mixed.b_value, 0.0);
    }
}
