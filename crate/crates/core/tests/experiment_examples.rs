use qecmarkov::channels::{bitflip_confusion, CodeOperators, ConfusionMatrix};
use qecmarkov::code::{builtin_five_qubit, builtin_rep3};
use qecmarkov::experiments::*;
use qecmarkov::Error;

#[test]
fn circuit_oracle_examples() {
    for m in 0..4 {
        assert_eq!(circuit_oracle(0.0, m).unwrap(), 1.0);
    }
    assert!(circuit_oracle(0.1, 21).is_err());
    assert!(circuit_oracle(1.2, 1).is_err());
}

#[test]
fn perfect_recovery_is_composable_and_noisy_is_not() {
    let code = builtin_rep3();
    let ops = CodeOperators::new(&code).unwrap();
    let r = ops.recovery().clone();
    assert!(!composability_check(&ops, &r, &r).unwrap().violated);
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    let report = composability_check(&ops, &noisy, &noisy).unwrap();
    assert!(report.violated && report.distance > 1e-4);
}

#[test]
fn five_qubit_logical_error_exceeds_rep3() {
    let rep = CodeOperators::new(&builtin_rep3()).unwrap();
    let five = CodeOperators::new(&builtin_five_qubit()).unwrap();
    let v5 = verify_theorem1(&five, &ConfusionMatrix::bitflip(4, 0.05).unwrap()).unwrap();
    let v3 = verify_theorem1(&rep, &ConfusionMatrix::bitflip(2, 0.05).unwrap()).unwrap();
    assert!(v5.violated && v3.violated);
    let err = |v: &Theorem1Verdict| 1.0 - v.pauli_weights[0].probability;
    assert!(err(&v5) > err(&v3));
    assert!(v5.prediction_error() < 1e-12);
}

#[test]
fn theorem_requires_distance_three() {
    let code = qecmarkov::parse_code_file("n 2\nk 1\nd 1\nstabilizer ZZ\nlogical_z ZI\n").unwrap();
    let ops = CodeOperators::new(&code).unwrap();
    let err = verify_theorem1(&ops, &ConfusionMatrix::bitflip(1, 0.1).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)));
}

#[test]
fn leading_order_zero_row() {
    let ops = CodeOperators::new(&builtin_rep3()).unwrap();
    let rows = leading_order_report(&ops, &[0.0, 1e-3]).unwrap();
    assert_eq!(rows[0].measured, 0.0);
    assert!(rows[0].ratio.is_none());
    assert!((rows[1].ratio.unwrap() - 1.0).abs() < 0.1);
    assert!(leading_order_csv(&rows).contains("0,0,0,\n"));
}

#[test]
fn polarization_is_non_increasing_and_bounded() {
    for code in [builtin_rep3(), builtin_five_qubit()] {
        let rec = polarization_sequence(&code, 0.1, 30).unwrap();
        assert!(rec.q.iter().all(|q| (-1.0..=1.0 + 1e-12).contains(q)));
        assert!(rec.q.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn multi_logical_codes_are_rejected() {
    let code = qecmarkov::parse_code_file("n 2\nk 2\nlogical_z ZI\nlogical_z IZ\n").unwrap();
    assert!(matches!(polarization_sequence(&code, 0.1, 3), Err(Error::Unsupported(_))));
}
