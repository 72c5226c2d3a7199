//! Classical Markov-chain view of noisy recovery on codes whose rounds map
//! computational basis states to mixtures of computational basis states.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{basis_state, bitflip_confusion, Channel, CodeOperators, ConfusionMatrix};
use crate::code::{StabilizerCode, Syndrome};
use crate::error::{check_probability, Error, Result};
use crate::linalg::{format_float, real_eigenvalues};

const CLASSICAL_TOLERANCE: f64 = 1e-10;

fn basis_label(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// True when every computational basis state is sent to a diagonal state.
pub fn classicality_check(chan: &Channel) -> bool {
    if chan.in_dim() != chan.out_dim() {
        return false;
    }
    let d = chan.in_dim();
    (0..d).all(|i| {
        let out = chan.apply(&basis_state(d, i)).expect("square channel");
        out.indexed_iter()
            .all(|((a, b), v)| a == b || v.norm() < CLASSICAL_TOLERANCE)
    })
}

/// Column-stochastic matrix over computational basis states, entry
/// `[out][in] = ⟨out| Λ(|in⟩⟨in|) |out⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    states: Vec<String>,
    indices: Vec<usize>,
    matrix: Array2<f64>,
}

/// Basis indices grouped by syndrome, following the images of the encoding
/// unitary (`|s⟩ ⊗ |ℓ⟩` in order). Falls back to natural order when the
/// encoded states are not computational basis states.
pub fn default_state_order(code: &StabilizerCode) -> Result<Vec<usize>> {
    let ops = CodeOperators::new(code)?;
    let u = ops.encoding_unitary();
    let dim = u.nrows();
    let mut order = Vec::with_capacity(dim);
    for col in u.columns() {
        let hits: Vec<usize> = (0..dim).filter(|&i| col[i].norm() > 1e-12).collect();
        match hits.as_slice() {
            [i] => order.push(*i),
            _ => return Ok((0..dim).collect()),
        }
    }
    Ok(order)
}

pub fn transition_matrix(code: &StabilizerCode, chan: &Channel) -> Result<TransitionMatrix> {
    let order = default_state_order(code)?;
    transition_matrix_with_order(code, chan, &order)
}

/// Transition matrix with rows and columns in the given basis order.
pub fn transition_matrix_with_order(
    code: &StabilizerCode,
    chan: &Channel,
    order: &[usize],
) -> Result<TransitionMatrix> {
    let dim = 1usize << code.n();
    if chan.in_dim() != dim || chan.out_dim() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: chan.in_dim(),
        });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..dim).collect::<Vec<_>>() {
        return Err(Error::Domain("state order is not a permutation of the basis".into()));
    }
    if !classicality_check(chan) {
        return Err(Error::Domain(
            "channel creates coherences between computational basis states".into(),
        ));
    }
    let images: Vec<Array2<Complex64>> = order
        .iter()
        .map(|&i| chan.apply(&basis_state(dim, i)).expect("dimension checked"))
        .collect();
    let matrix = Array2::from_shape_fn((dim, dim), |(r, c)| {
        let i = order[r];
        images[c][[i, i]].re
    });
    Ok(TransitionMatrix {
        states: order.iter().map(|&i| basis_label(i, code.n())).collect(),
        indices: order.to_vec(),
        matrix,
    })
}

impl TransitionMatrix {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Computational basis index of each row/column.
    pub fn basis_indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    /// Probability of moving from `from` to `to` in one step.
    pub fn get(&self, to: &str, from: &str) -> Option<f64> {
        Some(self.matrix[[self.position(to)?, self.position(from)?]])
    }

    /// Largest deviation of a column sum from 1.
    pub fn column_sum_error(&self) -> f64 {
        self.matrix
            .columns()
            .into_iter()
            .map(|c| (c.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn power(&self, m: usize) -> Array2<f64> {
        let mut acc = Array2::eye(self.matrix.nrows());
        for _ in 0..m {
            acc = self.matrix.dot(&acc);
        }
        acc
    }

    pub fn step(&self, dist: &Array1<f64>) -> Array1<f64> {
        self.matrix.dot(dist)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "states": self.states,
            "matrix": self.matrix.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    /// Sorted by decreasing modulus.
    pub eigenvalues: Vec<Complex64>,
    pub spectral_radius: f64,
    pub second_largest_modulus: f64,
    /// Per-round decay factor of the slowest non-stationary mode.
    pub asymptotic_rate: f64,
    /// `|λ3| / |λ2|`, the rate at which the slowest mode takes over.
    pub subdominant_ratio: Option<f64>,
}

impl SpectralSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im,modulus\n");
        for (i, v) in self.eigenvalues.iter().enumerate() {
            out += &format!("{i},{},{},{}\n", format_float(v.re), format_float(v.im), format_float(v.norm()));
        }
        out
    }
}

pub fn spectral_summary(tm: &TransitionMatrix) -> SpectralSummary {
    let mut eigenvalues = real_eigenvalues(&tm.matrix);
    eigenvalues.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let modulus = |i: usize| eigenvalues.get(i).map_or(0.0, |v| v.norm());
    let second = modulus(1);
    SpectralSummary {
        spectral_radius: modulus(0),
        second_largest_modulus: second,
        asymptotic_rate: second,
        subdominant_ratio: (second > 0.0).then(|| modulus(2) / second),
        eigenvalues,
    }
}

/// Recovery that always reads `s ⊕ e` when the true syndrome is `s`.
pub fn conditional_recovery(code: &StabilizerCode, e: &Syndrome) -> Result<Channel> {
    if e.len() != code.num_syndrome_bits() {
        return Err(Error::Dimension {
            expected: code.num_syndrome_bits(),
            got: e.len(),
        });
    }
    CodeOperators::new(code)?.noisy_recovery(&ConfusionMatrix::shift(e))
}

/// Weight of pattern `e` under independent bit flips.
pub fn pattern_weight(e: &Syndrome, p: f64) -> f64 {
    let h = e.weight() as i32;
    (1.0 - p).powi(e.len() as i32 - h) * p.powi(h)
}

/// Diagonal of an operator in a transition matrix's state order.
fn diagonal_in_order(tm: &TransitionMatrix, m: &Array2<Complex64>) -> Array1<f64> {
    tm.indices.iter().map(|&i| m[[i, i]].re).collect()
}

/// `q_0 … q_{m_max}` obtained by propagating probability vectors through the
/// chain, combining both logical initialisations.
pub fn chain_polarization(code: &StabilizerCode, p: f64, m_max: usize) -> Result<Vec<f64>> {
    check_probability(p)?;
    if code.k() != 1 {
        return Err(Error::Unsupported("polarization needs exactly one logical qubit".into()));
    }
    let ops = CodeOperators::new(code)?;
    let noisy = ops.noisy_recovery(&bitflip_confusion(code, p)?)?;
    let tm = transition_matrix(code, &noisy)?;
    let z = crate::pauli::parse_pauli("Z")?.dense()?;
    let observable = diagonal_in_order(&tm, &ops.decoding().dual_apply(&z)?);
    let mut dists = [0usize, 1].map(|j| {
        let rho = ops.encoding().apply(&basis_state(2, j)).expect("logical state");
        diagonal_in_order(&tm, &rho)
    });
    let mut q = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            dists = dists.map(|d| tm.step(&d));
        }
        q.push((observable.dot(&dists[0]) - observable.dot(&dists[1])) / 2.0);
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphNode {
    pub label: String,
    pub logical: usize,
    pub syndrome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphEdge {
    pub from: String,
    pub to: String,
    pub pattern: String,
    /// Probability of this transition given the pattern occurred.
    pub probability: f64,
    /// Probability of the pattern itself.
    pub weight: f64,
    pub logical_transition: bool,
}

/// One noisy round drawn as a graph over computational basis states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

const PATTERN_COLOURS: [&str; 8] = [
    "black", "red", "blue", "orange", "darkgreen", "purple", "brown", "gray",
];

impl LabeledGraph {
    pub fn node(&self, label: &str) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }

    /// DOT rendering; self-loops are left out and edges are coloured by pattern.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph round {\n  node [shape=circle];\n");
        for n in &self.nodes {
            out += &format!(
                "  \"{}\" [label=\"{}\\nL={} s={}\"];\n",
                n.label, n.label, n.logical, n.syndrome
            );
        }
        for e in self.edges.iter().filter(|e| e.from != e.to) {
            let idx = usize::from_str_radix(&e.pattern, 2).unwrap_or(0);
            let colour = PATTERN_COLOURS[idx % PATTERN_COLOURS.len()];
            out += &format!(
                "  \"{}\" -> \"{}\" [color={colour}, label=\"{}\"{}];\n",
                e.from,
                e.to,
                e.pattern,
                if e.logical_transition { ", style=bold" } else { "" }
            );
        }
        out += "}\n";
        out
    }
}

pub fn cube_graph(code: &StabilizerCode, p: f64) -> Result<LabeledGraph> {
    check_probability(p)?;
    let ops = CodeOperators::new(code)?;
    let dim = ops.data_dim();
    let order = default_state_order(code)?;
    let n = code.n();

    let mut nodes = Vec::with_capacity(dim);
    for &i in &order {
        let rho = basis_state(dim, i);
        let decoded = ops.decoding().apply(&rho)?;
        let logical = (0..decoded.nrows())
            .find(|&j| (decoded[[j, j]].re - 1.0).abs() < CLASSICAL_TOLERANCE)
            .ok_or_else(|| Error::Domain(format!("state {} does not decode to a basis state", basis_label(i, n))))?;
        let syndrome = code
            .syndromes()
            .find(|s| (ops.projector(s)[[i, i]].re - 1.0).abs() < CLASSICAL_TOLERANCE)
            .ok_or_else(|| Error::Domain(format!("state {} has no definite syndrome", basis_label(i, n))))?;
        nodes.push(GraphNode {
            label: basis_label(i, n),
            logical,
            syndrome: syndrome.to_string(),
        });
    }

    let mut edges = Vec::new();
    for e in code.syndromes() {
        let chan = ops.noisy_recovery(&ConfusionMatrix::shift(&e))?;
        let tm = transition_matrix_with_order(code, &chan, &order)?;
        for (c, from) in nodes.iter().enumerate() {
            for (r, to) in nodes.iter().enumerate() {
                let prob = tm.matrix[[r, c]];
                if prob > CLASSICAL_TOLERANCE {
                    edges.push(GraphEdge {
                        from: from.label.clone(),
                        to: to.label.clone(),
                        pattern: e.to_string(),
                        probability: prob,
                        weight: pattern_weight(&e, p),
                        logical_transition: from.logical != to.logical,
                    });
                }
            }
        }
    }
    Ok(LabeledGraph { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin_five_qubit, builtin_rep3};

    fn s(t: &str) -> Syndrome {
        t.parse().unwrap()
    }

    #[test]
    fn default_order_is_grouped_by_syndrome() {
        let order = default_state_order(&builtin_rep3()).unwrap();
        let labels: Vec<String> = order.iter().map(|&i| basis_label(i, 3)).collect();
        assert_eq!(labels, ["000", "111", "001", "110", "100", "011", "010", "101"]);
    }

    #[test]
    fn classicality() {
        let rep = builtin_rep3();
        let noisy = crate::channels::noisy_recovery_map(&rep, &bitflip_confusion(&rep, 0.1).unwrap()).unwrap();
        assert!(classicality_check(&noisy));
        let h = 1.0 / 2f64.sqrt();
        let u = Array2::from_shape_vec((2, 2), vec![h, h, h, -h])
            .unwrap()
            .mapv(|v| Complex64::new(v, 0.0));
        assert!(!classicality_check(&Channel::unitary(&u).unwrap()));
        let five = builtin_five_qubit();
        let noisy5 = crate::channels::noisy_recovery_map(&five, &bitflip_confusion(&five, 0.1).unwrap()).unwrap();
        assert!(!classicality_check(&noisy5));
        assert!(transition_matrix(&five, &noisy5).is_err());
    }

    #[test]
    fn perfect_recovery_matrix_columns_are_indicators() {
        let rep = builtin_rep3();
        let tm = transition_matrix(&rep, &crate::channels::recovery_map(&rep).unwrap()).unwrap();
        for col in tm.matrix().columns() {
            assert_eq!(col.iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(col.iter().filter(|&&v| v == 0.0).count(), 7);
        }
        let spec = spectral_summary(&tm);
        let ones = spec.eigenvalues.iter().filter(|v| (*v - 1.0).norm() < 1e-12).count();
        assert!(ones >= 2);
    }

    #[test]
    fn conditional_maps() {
        let rep = builtin_rep3();
        let r00 = conditional_recovery(&rep, &s("00")).unwrap();
        assert!(r00.distance(&crate::channels::recovery_map(&rep).unwrap()) < 1e-15);
        let r11 = conditional_recovery(&rep, &s("11")).unwrap();
        let out = r11.apply(&basis_state(8, 0b101)).unwrap();
        assert!(crate::linalg::max_abs_diff(&out, &basis_state(8, 0b101)) < 1e-15);
        // 001 (syndrome 01) reads 10 and gets XII: 101, which decodes to 1
        let out = r11.apply(&basis_state(8, 0b001)).unwrap();
        assert!(crate::linalg::max_abs_diff(&out, &basis_state(8, 0b101)) < 1e-15);
        assert!(conditional_recovery(&rep, &s("1")).is_err());
    }

    #[test]
    fn cube_graph_structure() {
        let g = cube_graph(&builtin_rep3(), 0.1).unwrap();
        let node = g.node("101").unwrap();
        assert_eq!((node.logical, node.syndrome.as_str()), (1, "11"));
        assert_eq!(g.edges.len(), 8 * 4);
        for e in &g.edges {
            if e.logical_transition {
                assert_ne!(e.pattern, "00");
            }
        }
        assert!(g.to_dot().contains("\"001\" -> \"000\" [color=black"));
    }
}
