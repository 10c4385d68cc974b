use proptest::prelude::*;
use qclone::synth::{
    anf_of, extract_bijection, input_labels, output_labels, synthesize_cnots, table1_bijection, BasisBijection, Weight,
};
use qclone::Error;

fn bijection() -> impl Strategy<Value = BasisBijection> {
    Just((0..8usize).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| BasisBijection::from_slice(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn anf_reproduces_truth_table(b in bijection()) {
        for w in 0..3 {
            let p = anf_of(&b, w);
            for i in 0..8 {
                prop_assert_eq!(p.evaluate(i), b.output_bit(i, w));
            }
        }
    }

    #[test]
    fn synthesis_is_exact_or_rejects_nonlinear(b in bijection()) {
        let affine = (0..3).all(|w| anf_of(&b, w).is_affine());
        match synthesize_cnots(&b) {
            Ok(seq) => {
                prop_assert!(affine);
                prop_assert_eq!(seq.to_circuit().permutation().unwrap(), b.map().iter().map(|&v| v as usize).collect::<Vec<_>>());
            }
            Err(Error::NonAffine { .. }) => prop_assert!(!affine),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn basic_permutation_among_label_matches() {
    use Weight::*;
    let candidates = extract_bijection(&input_labels(&[X, Y, Y, Z]), &output_labels()).unwrap();
    assert!(candidates.contains(&table1_bijection()));
    // Two tied pairs, aY and bY.
    assert_eq!(candidates.len(), 4);
}
