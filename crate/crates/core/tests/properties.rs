use epr_steering::linalg::{
    axis_angle_rotation, bloch_operator, eig_hermitian, kron, unitary_from_euler,
};
use epr_steering::{
    fidelity, honest_steering, partial_trace, scheme_axes, steering_bound, werner, Bloch,
    ComplexMatrix, Density, MeasurementScheme, Subsystem, WernerParameter, SUPPORTED_SETTINGS,
};
use num_complex::Complex;
use proptest::prelude::*;

fn bloch() -> impl Strategy<Value = Bloch> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| Bloch::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Bloch> {
    bloch()
        .prop_filter("nonzero", |v| v.norm() > 1e-3)
        .prop_map(|v| v.normalized())
}

/// Random density matrix `G G† / Tr(G G†)` of dimension `dim`.
fn state(dim: usize) -> impl Strategy<Value = Density> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |g| {
        let data = g.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        let g = ComplexMatrix::new(dim, data).unwrap();
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        Density::new(gg.scale(1.0 / tr)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bloch_operator_spectrum_is_plus_minus_norm(a in bloch()) {
        let ev = eig_hermitian(&bloch_operator(&a)).unwrap();
        prop_assert!((ev[1] - a.norm()).abs() < 1e-12);
        prop_assert!((ev[0] + a.norm()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_undoes_tensor(a in state(2), b in state(2)) {
        let ab = a.tensor(&b).unwrap();
        let first = partial_trace(&ab, Subsystem::First).unwrap();
        let second = partial_trace(&ab, Subsystem::Second).unwrap();
        prop_assert!(first.matrix().max_abs_diff(a.matrix()) < 1e-12);
        prop_assert!(second.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in state(4), b in state(4)) {
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&fab));
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bound_is_rotation_invariant(axis in unit(), angle in 0.0..6.3f64, idx in 0usize..5) {
        let n = SUPPORTED_SETTINGS[idx];
        let scheme = scheme_axes::<f64>(n).unwrap();
        let rotated = scheme.rotated(&axis_angle_rotation(&axis, angle));
        let a = steering_bound(&scheme).unwrap().value;
        let b = steering_bound(&rotated).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn bound_lies_between_one_over_root_n_and_one(axes in prop::collection::vec(unit(), 1..9)) {
        let Ok(scheme) = MeasurementScheme::custom(axes) else { return Ok(()) };
        let Ok(bound) = steering_bound(&scheme) else { return Ok(()) };
        let n = scheme.n as f64;
        // The mean of |Σ ±u_k|² over all signs is n, so the best is at least √n.
        prop_assert!(bound.value >= 1.0 / n.sqrt() - 1e-12);
        prop_assert!(bound.value <= 1.0 + 1e-12);
    }

    #[test]
    fn honest_werner_value_is_local_unitary_invariant(mu in 0.0..1.0f64, a in 0.0..6.3f64, b in 0.0..3.2f64, c in 0.0..6.3f64) {
        // W_μ is U⊗U invariant, so S_n is unchanged when both sides rotate.
        let u = unitary_from_euler(a, b, c);
        let uu = kron(&u, &u).unwrap();
        let rho = werner(WernerParameter::new(mu).unwrap());
        let turned = rho.evolve(&uu);
        for n in SUPPORTED_SETTINGS {
            let scheme = scheme_axes::<f64>(n).unwrap();
            let s = honest_steering(&turned, &scheme).unwrap().s_value;
            prop_assert!((s - mu).abs() < 1e-12);
        }
    }
}
