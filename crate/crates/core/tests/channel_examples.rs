use ndarray::Array2;
use num_complex::Complex64;
use qecmarkov::channels::*;
use qecmarkov::code::{builtin_five_qubit, builtin_rep3, Syndrome};
use qecmarkov::linalg::{dagger, identity, kron, max_abs_diff};
use qecmarkov::markov::{conditional_recovery, pattern_weight};
use std::sync::OnceLock;

fn five_ops() -> &'static CodeOperators {
    static OPS: OnceLock<CodeOperators> = OnceLock::new();
    OPS.get_or_init(|| CodeOperators::new(&builtin_five_qubit()).unwrap())
}

fn rep_ops() -> CodeOperators {
    CodeOperators::new(&builtin_rep3()).unwrap()
}

fn s(t: &str) -> Syndrome {
    t.parse().unwrap()
}

#[test]
fn five_qubit_codespace_projector_is_product_of_half_projectors() {
    let code = builtin_five_qubit();
    let id = identity(32);
    let product = code.generators().iter().fold(id.clone(), |acc, g| {
        acc.dot(&((&id + &g.dense().unwrap()) * Complex64::new(0.5, 0.0)))
    });
    let e = five_ops().isometry();
    let eed = e.dot(&dagger(e));
    assert!(max_abs_diff(&eed, &product) < 1e-12);
    assert!(max_abs_diff(&eed.dot(&eed), &eed) < 1e-12);
    assert!(max_abs_diff(&dagger(&eed), &eed) < 1e-12);
}

#[test]
fn projectors_resolve_identity() {
    assert!(rep_ops().projector_error() < 1e-12);
    assert!(five_ops().projector_error() < 1e-12);
}

#[test]
fn recovery_image_lies_in_codespace() {
    let ops = rep_ops();
    let p0 = &ops.projectors()[0];
    for i in 0..8 {
        for j in 0..8 {
            let mut unit = Array2::zeros((8, 8));
            unit[[i, j]] = Complex64::new(1.0, 0.0);
            let out = ops.recovery().apply(&unit).unwrap();
            assert!(max_abs_diff(&p0.dot(&out).dot(p0), &out) < 1e-12);
        }
    }
}

#[test]
fn noisy_recovery_choi_is_positive() {
    let code = builtin_rep3();
    let ops = rep_ops();
    for p in [0.0, 0.05, 0.5] {
        let chan = ops.noisy_recovery(&bitflip_confusion(&code, p).unwrap()).unwrap();
        let report = chan.verify_cptp(1e-10);
        assert!(report.is_cptp(), "{report:?}");
        assert!(report.choi_min_eigenvalue.unwrap() >= -1e-10);
    }
}

#[test]
fn decoding_is_cptp_and_inverts_encoding() {
    for ops in [&rep_ops(), five_ops()] {
        assert!(ops.decoding().verify_cptp(1e-10).is_cptp());
        let de = ops.encoding().then(ops.decoding()).unwrap();
        assert!(de.distance(&Channel::identity(2).unwrap()) < 1e-12);
        assert!(ops.retraction(&Channel::identity(ops.data_dim()).unwrap()).unwrap()
            .distance(&Channel::identity(2).unwrap()) < 1e-12);
    }
}

#[test]
fn repeated_noisy_rounds_stay_pauli() {
    let code = builtin_rep3();
    let ops = rep_ops();
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    for m in 0..6 {
        assert!(ops.retraction_of_power(&noisy, m).unwrap().is_pauli_channel(1e-12).unwrap());
    }
    let two = ops.retraction_of_power(&noisy, 2).unwrap();
    let x = two.pauli_error_probabilities().unwrap()[1].1;
    assert!(x > 0.0);
    assert!(two.distance(&Channel::identity(2).unwrap()) > 1e-4);
}

#[test]
fn table_two_mapping() {
    let u = rep_ops().encoding_unitary();
    // (syndrome, logical) -> data basis state
    let table = [
        ("00", 0, "000"),
        ("00", 1, "111"),
        ("01", 0, "001"),
        ("01", 1, "110"),
        ("10", 0, "100"),
        ("10", 1, "011"),
        ("11", 0, "010"),
        ("11", 1, "101"),
    ];
    for (syn, l, out) in table {
        let col = s(syn).index() * 2 + l;
        let row = usize::from_str_radix(out, 2).unwrap();
        for r in 0..8 {
            let expected = if r == row { 1.0 } else { 0.0 };
            assert_eq!(u[[r, col]], Complex64::new(expected, 0.0), "{syn} {l}");
        }
    }
    assert!(max_abs_diff(&dagger(&u).dot(&u), &identity(8)) < 1e-12);
}

#[test]
fn syndrome_trace_equals_decoding() {
    for ops in [&rep_ops(), five_ops()] {
        let tr = ops.syndrome_trace_channel().unwrap();
        assert!(tr.distance(ops.decoding()) < 1e-10);
    }
}

#[test]
fn conjugated_noisy_round_with_zero_syndrome_input_is_retraction() {
    let code = builtin_rep3();
    let ops = rep_ops();
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    let u = ops.encoding_unitary();
    let (ud, mut zero) = (dagger(&u), Array2::zeros((4, 4)));
    zero[[0, 0]] = Complex64::new(1.0, 0.0);
    let via_unitary = Channel::from_map(2, 2, |rho| {
        let data = u.dot(&kron(&zero, rho)).dot(&ud);
        let out = ud.dot(&noisy.apply(&data).unwrap()).dot(&u);
        Array2::from_shape_fn((2, 2), |(a, b)| (0..4).map(|s| out[[s * 2 + a, s * 2 + b]]).sum())
    })
    .unwrap();
    assert!(via_unitary.distance(&ops.retraction(&noisy).unwrap()) < 1e-12);
}

#[test]
fn generalized_retraction_examples() {
    let code = builtin_rep3();
    let ops = rep_ops();
    let mut rho01 = Array2::zeros((4, 4));
    rho01[[1, 1]] = Complex64::new(1.0, 0.0);
    let out = ops.generalized_retraction(&rho01, ops.recovery()).unwrap();
    assert!(out.distance(&Channel::identity(2).unwrap()) < 1e-12);

    let mixed = identity(4).mapv(|v| v * 0.25);
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    let a = ops.generalized_retraction(&mixed, &noisy).unwrap();
    let b = ops.retraction(&noisy).unwrap();
    assert!(a.verify_cptp(1e-10).is_cptp());
    assert!(a.distance(&b) > 1e-3);
    let bad = identity(4);
    assert!(ops.generalized_retraction(&bad, &noisy).is_err());
}

#[test]
fn conditional_maps_recombine() {
    let code = builtin_rep3();
    let ops = rep_ops();
    let parts: Vec<(Syndrome, Channel)> = code
        .syndromes()
        .map(|e| (e, conditional_recovery(&code, &e).unwrap()))
        .collect();
    for p in [0.01, 0.1, 0.3] {
        let noisy = ops.noisy_recovery(&bitflip_confusion(&code, p).unwrap()).unwrap();
        let mut sum = Array2::zeros(noisy.matrix().dim());
        for (e, chan) in &parts {
            sum = sum + chan.matrix() * Complex64::new(pattern_weight(e, p), 0.0);
        }
        assert!(max_abs_diff(&sum, noisy.matrix()) < 1e-12);
    }
}

#[test]
fn channel_json_schema() {
    let json: serde_json::Value = serde_json::from_str(&rep_ops().decoding().to_json()).unwrap();
    assert_eq!(json["in_dim"], 8);
    assert_eq!(json["out_dim"], 2);
    assert_eq!(json["representation"], "column-stacked");
    assert_eq!(json["entries"].as_array().unwrap().len(), 4 * 64);
}
