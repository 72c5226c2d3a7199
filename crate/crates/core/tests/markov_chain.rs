use qecmarkov::channels::{bitflip_confusion, CodeOperators};
use qecmarkov::code::builtin_rep3;
use qecmarkov::experiments::{asymptotic_decay_rate, polarization_sequence};
use qecmarkov::markov::*;

#[test]
fn chain_polarization_matches_superoperator() {
    let code = builtin_rep3();
    for p in [0.01, 0.1, 0.3] {
        let chain = chain_polarization(&code, p, 60).unwrap();
        let exact = polarization_sequence(&code, p, 60).unwrap().q;
        for (a, b) in chain.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn powers_stay_stochastic() {
    let code = builtin_rep3();
    let ops = CodeOperators::new(&code).unwrap();
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.3).unwrap()).unwrap();
    let tm = transition_matrix(&code, &noisy).unwrap();
    assert!(tm.column_sum_error() < 1e-12);
    let p60 = tm.power(60);
    for col in p60.columns() {
        assert!((col.sum() - 1.0).abs() < 1e-9);
        assert!(col.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn spectrum_sets_decay_rate() {
    let code = builtin_rep3();
    let ops = CodeOperators::new(&code).unwrap();
    for p in [0.01, 0.1, 0.3] {
        let noisy = ops.noisy_recovery(&bitflip_confusion(&code, p).unwrap()).unwrap();
        let summary = spectral_summary(&transition_matrix(&code, &noisy).unwrap());
        assert!((summary.spectral_radius - 1.0).abs() < 1e-12);
        assert!(summary.asymptotic_rate > 0.0 && summary.asymptotic_rate < 1.0);
    }
    let noisy = ops.noisy_recovery(&bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    let summary = spectral_summary(&transition_matrix(&code, &noisy).unwrap());
    let q = polarization_sequence(&code, 0.1, 60).unwrap().q;
    let (rate, r2) = asymptotic_decay_rate(&q, 30..=60);
    assert!((rate - summary.asymptotic_rate).abs() < 1e-6);
    assert!(r2 > 0.999);
    assert!(summary.to_csv().starts_with("index,re,im,modulus\n"));
}

#[test]
fn transition_json_schema() {
    let code = builtin_rep3();
    let noisy = qecmarkov::channels::noisy_recovery_map(&code, &bitflip_confusion(&code, 0.1).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&transition_matrix(&code, &noisy).unwrap().to_json()).unwrap();
    assert_eq!(v["states"][1], "111");
    assert_eq!(v["matrix"].as_array().unwrap().len(), 8);
}

#[test]
fn graph_edges_per_pattern() {
    let g = cube_graph(&builtin_rep3(), 0.2).unwrap();
    for node in &g.nodes {
        for pattern in ["00", "01", "10", "11"] {
            let out: Vec<_> = g.edges.iter().filter(|e| e.from == node.label && e.pattern == pattern).collect();
            assert_eq!(out.len(), 1);
            assert!((out[0].probability - 1.0).abs() < 1e-12);
        }
    }
    assert!(g.edges.iter().any(|e| e.logical_transition));
    let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 8);
}
