use proptest::prelude::*;
use qecmarkov::channels::CodeOperators;
use qecmarkov::code::{builtin_five_qubit, builtin_rep3, StabilizerCode};
use qecmarkov::experiments::logical_action_error;
use qecmarkov::pauli::{enumerate_paulis, PauliOperator};

fn code_and_paulis() -> impl Strategy<Value = (StabilizerCode, PauliOperator, PauliOperator)> {
    prop_oneof![Just(builtin_rep3()), Just(builtin_five_qubit())].prop_flat_map(|code| {
        let n = code.n();
        let mask = (1u64 << n) - 1;
        let p = (any::<u64>(), any::<u64>(), 0u8..4)
            .prop_map(move |(x, z, ph)| PauliOperator::from_bits(n, x & mask, z & mask, ph).unwrap());
        (Just(code), p.clone(), p)
    })
}

proptest! {
    #[test]
    fn syndromes_add((code, a, b) in code_and_paulis()) {
        let ab = code.syndrome_of(&a.mul(&b).unwrap()).unwrap();
        let sum = code.syndrome_of(&a).unwrap().xor(&code.syndrome_of(&b).unwrap());
        prop_assert_eq!(ab, sum);
    }

    #[test]
    fn decomposition_is_exact((code, a, _b) in code_and_paulis()) {
        let dec = code.decompose(&a).unwrap();
        prop_assert_eq!(dec.logical.mul(&dec.correction).unwrap(), a.clone());
        prop_assert!(code.in_normalizer(&dec.logical).unwrap());
        prop_assert_eq!(&dec.correction, code.correction(&code.syndrome_of(&a).unwrap()));
    }
}

#[test]
fn rep3_decomposition_against_brute_force() {
    let code = builtin_rep3();
    let gens = code.generators();
    let stabilizers: Vec<PauliOperator> = (0..4u64).map(|m| code.stabilizer_element(m)).collect();
    for p in enumerate_paulis(3) {
        let dec = code.decompose(&p).unwrap();
        assert!(gens.iter().all(|g| dec.logical.commutes(g).unwrap()));
        let is_stab = stabilizers.iter().any(|s| s.same_letters(&dec.logical));
        assert_eq!(is_stab, code.in_stabilizer_group_up_to_phase(&dec.logical).unwrap());
    }
    let dec = code.decompose(&"XII".parse().unwrap()).unwrap();
    assert!(code.in_stabilizer_group_up_to_phase(&dec.logical).unwrap());
}

#[test]
fn logical_labels_match_dense_conjugation() {
    for code in [builtin_rep3(), builtin_five_qubit()] {
        let ops = CodeOperators::new(&code).unwrap();
        for p in enumerate_paulis(code.n()) {
            for ph in [0, 1, 2, 3] {
                let l = p.with_phase(ph);
                if code.in_normalizer(&l).unwrap() {
                    assert!(logical_action_error(&ops, &l).unwrap() < 1e-12, "{l}");
                }
            }
        }
    }
}

#[test]
fn single_qubit_errors_are_stabilizer_equivalent_to_corrections() {
    for code in [builtin_rep3(), builtin_five_qubit()] {
        for q in 0..code.n() {
            for letter in ['X', 'Y', 'Z'] {
                let e = PauliOperator::single(code.n(), q, letter).unwrap();
                let dec = code.decompose(&e).unwrap();
                // rep3 only corrects bit flips; its Z errors are logical
                if code.name() == "rep3" && letter != 'X' {
                    continue;
                }
                assert!(code.in_stabilizer_group_up_to_phase(&dec.logical).unwrap(), "{e}");
            }
        }
    }
}

#[test]
fn codespace_rank_and_correction_orthogonality() {
    for code in [builtin_rep3(), builtin_five_qubit()] {
        let ops = CodeOperators::new(&code).unwrap();
        let p0 = &ops.projectors()[0];
        let rank: f64 = (0..p0.nrows()).map(|i| p0[[i, i]].re).sum();
        assert!((rank - 2.0).abs() < 1e-12);
        assert!(ops.correction_orthogonality_error() < 1e-10);
    }
}

#[test]
fn rep3_uncorrectable_logical_is_x() {
    let pair = builtin_rep3().find_uncorrectable_pair().unwrap();
    assert_eq!(pair.logical_pauli.to_string().trim_start_matches('-'), "X");
}
