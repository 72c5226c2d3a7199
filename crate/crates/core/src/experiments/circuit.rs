//! Brute-force density-matrix simulation of the repetition-code extraction
//! circuit with two ancillas. Shares no code with the superoperator engine.

use ndarray::Array2;

use crate::error::{check_probability, Error, Result};

/// Rounds beyond this are refused.
pub const MAX_CIRCUIT_ROUNDS: usize = 20;

// register order: anc0, anc1, d0, d1, d2 (anc0 is the most significant bit)
const QUBITS: usize = 5;
const DIM: usize = 1 << QUBITS;
const DATA_DIM: usize = 8;

fn bit(q: usize) -> usize {
    1 << (QUBITS - 1 - q)
}

fn permute(rho: &Array2<f64>, f: impl Fn(usize) -> usize) -> Array2<f64> {
    let mut out = Array2::zeros(rho.dim());
    for ((i, j), &v) in rho.indexed_iter() {
        out[[f(i), f(j)]] = v;
    }
    out
}

fn cnot(rho: &Array2<f64>, control: usize, target: usize) -> Array2<f64> {
    permute(rho, |i| if i & bit(control) != 0 { i ^ bit(target) } else { i })
}

fn flip(rho: &Array2<f64>, q: usize, p: f64) -> Array2<f64> {
    rho * (1.0 - p) + permute(rho, |i| i ^ bit(q)) * p
}

/// One round: fresh ancillas, four CNOTs, readout noise, measurement and the
/// lookup correction. Acts on the 3-qubit data density matrix.
fn round(data: &Array2<f64>, p: f64) -> Array2<f64> {
    let mut rho = Array2::zeros((DIM, DIM));
    // ancillas in |00⟩: data occupies the leading 8x8 block
    rho.slice_mut(ndarray::s![0..DATA_DIM, 0..DATA_DIM]).assign(data);
    let (a0, a1, d0, d1, d2) = (0, 1, 2, 3, 4);
    for (c, t) in [(d0, a0), (d1, a0), (d1, a1), (d2, a1)] {
        rho = cnot(&rho, c, t);
    }
    rho = flip(&rho, a0, p);
    rho = flip(&rho, a1, p);

    let mut out = Array2::zeros((DATA_DIM, DATA_DIM));
    for outcome in 0..4usize {
        let off = outcome * DATA_DIM;
        let block = rho.slice(ndarray::s![off..off + DATA_DIM, off..off + DATA_DIM]).to_owned();
        // outcome bits (anc0, anc1): 10 -> X on d0, 01 -> X on d2, 11 -> X on d1
        let fix = match outcome {
            0b10 => 0b100,
            0b01 => 0b001,
            0b11 => 0b010,
            _ => 0,
        };
        out += &permute(&block, |i| i ^ fix);
    }
    out
}

fn zzz(rho: &Array2<f64>) -> f64 {
    (0..DATA_DIM)
        .map(|i| if i.count_ones() % 2 == 0 { rho[[i, i]] } else { -rho[[i, i]] })
        .sum()
}

/// Polarization after `m` noisy rounds of the repetition code, followed by a
/// perfect round and a `ZZZ` readout, combining the `|000⟩` and `|111⟩` runs.
pub fn circuit_oracle(p: f64, m: usize) -> Result<f64> {
    check_probability(p)?;
    if m > MAX_CIRCUIT_ROUNDS {
        return Err(Error::Capacity {
            what: "circuit rounds",
            got: m,
            limit: MAX_CIRCUIT_ROUNDS,
        });
    }
    let run = |start: usize| {
        let mut rho = Array2::zeros((DATA_DIM, DATA_DIM));
        rho[[start, start]] = 1.0;
        for _ in 0..m {
            rho = round(&rho, p);
        }
        zzz(&round(&rho, 0.0))
    };
    Ok((run(0b000) - run(0b111)) / 2.0)
}
