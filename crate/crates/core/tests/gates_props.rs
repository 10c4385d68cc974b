use nalgebra::{DVector, Matrix2};
use proptest::prelude::*;
use qclone::gates::{apply_cnot, circuit_unitary, rotation_matrix, Circuit, CnotOp, Gate, PauliOp, RotationOp};
use qclone::qnum::{Pauli, PureState, QubitIndex, C64};

fn state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| PureState::from_amplitudes(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn cnot(n: usize) -> impl Strategy<Value = CnotOp> {
    (0..n, 1..n, any::<bool>()).prop_map(move |(c, d, inv)| CnotOp::with_inversion(c, (c + d) % n, inv).unwrap())
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n, -4.0..4.0f64, -4.0..4.0f64)
            .prop_map(|(w, theta, phi)| Gate::Rotation(RotationOp { wire: QubitIndex(w), theta, phi })),
        cnot(n).prop_map(Gate::Cnot),
        (0..n, 0..4usize)
            .prop_map(|(w, p)| Gate::Pauli(PauliOp { wire: QubitIndex(w), pauli: Pauli::from_index(p).unwrap() })),
    ]
}

fn circuit() -> impl Strategy<Value = (Circuit, PureState)> {
    (2..=4usize).prop_flat_map(|n| {
        (prop::collection::vec(gate(n), 0..20), state(n)).prop_map(move |(ops, psi)| (Circuit::from_ops(n, ops).unwrap(), psi))
    })
}

fn max_diff(a: &PureState, b: &PureState) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unitary_matches_sequential((c, psi) in circuit()) {
        let u = circuit_unitary(&c).unwrap();
        let v = u * DVector::from_column_slice(psi.amplitudes());
        let seq = c.apply(&psi).unwrap();
        let worst = v.iter().zip(seq.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cnot_is_an_involution_and_preserves_norm(op in cnot(4), psi in state(4)) {
        let once = apply_cnot(&psi, &op).unwrap();
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(max_diff(&apply_cnot(&once, &op).unwrap(), &psi) < 1e-12);
    }

    #[test]
    fn rotation_inverse(theta in -10.0..10.0f64, phi in -10.0..10.0f64) {
        let p = rotation_matrix(theta, phi) * rotation_matrix(-theta, phi);
        prop_assert!((p - Matrix2::<C64>::identity()).norm() < 1e-12);
    }
}

#[test]
fn bar_placement_truth_table() {
    // On the target value both bars give x⊕y⊕1; the control bar also leaves
    // the control complemented, so the two maps differ on that wire.
    let target_bar = Circuit::parse(2, "P(0,!1)").unwrap().permutation().unwrap();
    let flag = Circuit::parse(2, "P!(0,1)").unwrap().permutation().unwrap();
    let control_bar = Circuit::parse(2, "P(!0,1)").unwrap().permutation().unwrap();
    for i in 0..4 {
        let (x, y) = (i >> 1, i & 1);
        assert_eq!(target_bar[i], (x << 1) | (x ^ y ^ 1));
        assert_eq!(flag[i], target_bar[i]);
        assert_eq!(control_bar[i], ((x ^ 1) << 1) | (x ^ y ^ 1));
        assert_eq!(control_bar[i] & 1, target_bar[i] & 1);
    }
    assert_ne!(control_bar, target_bar);
}
