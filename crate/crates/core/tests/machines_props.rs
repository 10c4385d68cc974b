use proptest::prelude::*;
use qclone::machines::{
    average_fidelity, orthogonal_decomposition, scaling_factor, shrunk_state, AveragingMeasure, Machine, Sampling,
};
use qclone::qnum::{density_of, equatorial_qubit, make_qubit, partial_trace, PureState, QubitIndex, C64};

fn qubit() -> impl Strategy<Value = PureState> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("non-zero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| make_qubit(C64::new(a, b), C64::new(c, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bh_clones_are_symmetric_and_shrunk(psi in qubit()) {
        let out = Machine::Bh.run(&psi).unwrap();
        prop_assert!(out.clone_a.max_abs_diff(&out.clone_b).unwrap() < 1e-10);
        let d = orthogonal_decomposition(&out.clone_a, &psi).unwrap();
        prop_assert!((d.f0_sq + d.f2_sq - 1.0).abs() < 1e-9 && d.f0_sq >= 0.0 && d.f2_sq >= 0.0);
        let model = shrunk_state(&psi, scaling_factor(&d)).unwrap();
        prop_assert!(out.clone_a.frobenius_distance(&model).unwrap() < 1e-9);
    }

    #[test]
    fn reduced_states_are_partial_traces(theta in -4.0..4.0f64, m in 0..4usize) {
        let machine = [Machine::OneOp, Machine::TwoOp { phi: 0.7 }, Machine::Bh, Machine::Pc][m];
        let out = machine.run(&equatorial_qubit(theta)).unwrap();
        let joint = density_of(&out.joint);
        let (wa, wb) = if machine == Machine::Pc { (1, 2) } else { (0, 1) };
        prop_assert!(out.clone_a.max_abs_diff(&partial_trace(&joint, QubitIndex(wa)).unwrap()).unwrap() < 1e-12);
        prop_assert!(out.clone_b.max_abs_diff(&partial_trace(&joint, QubitIndex(wb)).unwrap()).unwrap() < 1e-12);
        prop_assert!(out.clone_a.check_invariants().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn statistics_are_well_formed(phi in -7.0..7.0f64, polar in any::<bool>()) {
        let measure = if polar { AveragingMeasure::PolarUniform } else { AveragingMeasure::EquatorialUniform };
        let st = average_fidelity(Machine::TwoOp { phi }, measure, Sampling::GaussLegendre { order: 48 }).unwrap();
        prop_assert!(st.var_a >= -1e-12 && st.var_b >= -1e-12);
        if let Some(r) = st.correlation {
            prop_assert!(r.abs() <= 1.0 + 1e-9);
        }
        prop_assert!((0.0..=1.0).contains(&st.mean_a) && (0.0..=1.0).contains(&st.mean_b));
    }
}
