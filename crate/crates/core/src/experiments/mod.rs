//! Repeated noisy error-correction experiments: polarization decay,
//! composability checks and the two-round violation.

mod circuit;

pub use circuit::{circuit_oracle, MAX_CIRCUIT_ROUNDS};

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::channels::{bitflip_confusion, Channel, CodeOperators, ConfusionMatrix};
use crate::code::{StabilizerCode, Syndrome, UncorrectablePair};
use crate::error::{check_probability, Error, Result};
use crate::linalg::{dagger, format_float, vectorize, CMatrix};
use crate::pauli::{enumerate_paulis, parse_pauli, PauliOperator};

/// Threshold above which two logical channels count as different.
pub const COMPOSABILITY_THRESHOLD: f64 = 1e-10;

/// Polarization decay of one run; `eps[m]` needs `q[m + 1]` and `deps[m]`
/// needs `eps[m + 1]`, so trailing entries are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayRecord {
    pub code: String,
    pub p: f64,
    pub rounds: usize,
    pub q: Vec<f64>,
    pub eps: Vec<Option<f64>>,
    pub deps: Vec<Option<f64>>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

impl DecayRecord {
    pub fn from_polarization(code: &str, p: f64, q: Vec<f64>) -> Self {
        let rounds = q.len().saturating_sub(1);
        let eps: Vec<Option<f64>> = (0..q.len())
            .map(|m| {
                let (a, b) = (q[m], *q.get(m + 1)?);
                (a != 0.0).then(|| (1.0 - b / a) / 2.0)
            })
            .collect();
        let deps = (0..q.len())
            .map(|m| Some((eps.get(m + 1).copied()?? - eps[m]?).abs()))
            .collect();
        Self {
            code: code.to_string(),
            p,
            rounds,
            q,
            eps,
            deps,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# code={},p={}\nm,q_m,eps_m,abs_delta_eps\n", self.code, format_float(self.p));
        for m in 0..self.q.len() {
            out += &format!(
                "{m},{},{},{}\n",
                format_float(self.q[m]),
                fmt_opt(self.eps[m]),
                fmt_opt(self.deps[m])
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            position: line,
            message: format!("line {line}: {message}"),
        };
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| err(1, "missing `# code=..,p=..` line".into()))?;
        let (mut code, mut p) = (None, None);
        for field in meta.split(',') {
            match field.split_once('=') {
                Some(("code", v)) => code = Some(v.to_string()),
                Some(("p", v)) => p = Some(v.parse::<f64>().map_err(|e| err(1, e.to_string()))?),
                _ => return Err(err(1, format!("unexpected field {field:?}"))),
            }
        }
        let header = lines.next().ok_or_else(|| err(2, "missing header".into()))?;
        if header != "m,q_m,eps_m,abs_delta_eps" {
            return Err(err(2, format!("unexpected header {header:?}")));
        }
        let (mut q, mut eps, mut deps) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in lines.enumerate() {
            let no = i + 3;
            let cols: Vec<&str> = line.split(',').collect();
            let [m, qm, e, d] = cols.as_slice() else {
                return Err(err(no, "expected 4 columns".into()));
            };
            if m.parse::<usize>().ok() != Some(q.len()) {
                return Err(err(no, format!("expected m = {}", q.len())));
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|e: std::num::ParseFloatError| err(no, e.to_string()))
                }
            };
            q.push(qm.parse::<f64>().map_err(|e| err(no, e.to_string()))?);
            eps.push(opt(e)?);
            deps.push(opt(d)?);
        }
        Ok(Self {
            code: code.ok_or_else(|| err(1, "missing code".into()))?,
            p: p.ok_or_else(|| err(1, "missing p".into()))?,
            rounds: q.len().saturating_sub(1),
            q,
            eps,
            deps,
        })
    }
}

fn single_logical(ops: &CodeOperators) -> Result<()> {
    if ops.code().k() != 1 {
        return Err(Error::Unsupported(format!(
            "experiments need one logical qubit, code has k = {}",
            ops.code().k()
        )));
    }
    Ok(())
}

/// `q_m = Tr[𝒟†(Z) 𝓡̃^m(ℰ(Z/2))]` for `m = 0..=rounds`.
pub fn polarization_with(ops: &CodeOperators, noisy: &Channel, rounds: usize) -> Result<Vec<f64>> {
    single_logical(ops)?;
    let z = parse_pauli("Z")?.dense()?;
    let observable = vectorize(&ops.decoding().dual_apply(&z)?);
    let half_z = z.mapv(|v| v * 0.5);
    let mut state = vectorize(&ops.encoding().apply(&half_z)?);
    let mut q = Vec::with_capacity(rounds + 1);
    for m in 0..=rounds {
        if m > 0 {
            state = noisy.matrix().dot(&state);
        }
        let value: Complex64 = observable.iter().zip(&state).map(|(o, s)| o.conj() * s).sum();
        q.push(value.re);
    }
    Ok(q)
}

pub fn polarization_sequence(code: &StabilizerCode, p: f64, rounds: usize) -> Result<DecayRecord> {
    check_probability(p)?;
    let ops = CodeOperators::new(code)?;
    decay_with(&ops, p, rounds)
}

/// [`polarization_sequence`] reusing prebuilt operators.
pub fn decay_with(ops: &CodeOperators, p: f64, rounds: usize) -> Result<DecayRecord> {
    check_probability(p)?;
    single_logical(ops)?;
    let noisy = ops.noisy_recovery(&bitflip_confusion(ops.code(), p)?)?;
    let q = polarization_with(ops, &noisy, rounds)?;
    Ok(DecayRecord::from_polarization(ops.code().name(), p, q))
}

/// Least-squares line through `(x, y)`: `(slope, intercept, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComposabilityReport {
    /// `Ω[G_b ∘ G_a]`.
    pub lhs: Channel,
    /// `Ω[G_b] ∘ Ω[G_a]`.
    pub rhs: Channel,
    pub distance: f64,
    pub violated: bool,
}

/// Compares `Ω[G_b ∘ G_a]` with `Ω[G_b] ∘ Ω[G_a]`; `g_a` acts first.
pub fn composability_check(ops: &CodeOperators, g_a: &Channel, g_b: &Channel) -> Result<ComposabilityReport> {
    let lhs = ops.retraction_of_sequence(&[g_a, g_b])?;
    let rhs = ops.retraction(g_a)?.then(&ops.retraction(g_b)?)?;
    let distance = lhs.distance(&rhs);
    Ok(ComposabilityReport {
        lhs,
        rhs,
        distance,
        violated: distance > COMPOSABILITY_THRESHOLD,
    })
}

/// Weight of one logical Pauli in a two-round channel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogicalPauliWeight {
    pub pauli: String,
    pub probability: f64,
    /// Value predicted by summing over readout outcomes of both rounds.
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1Verdict {
    pub violated: bool,
    pub distance: f64,
    /// Distance of `Ω[𝓡̃]` from the logical identity.
    pub single_round_error: f64,
    /// `Ω[𝓡̃ ∘ 𝓡̃]`.
    pub logical_channel: Channel,
    pub is_pauli_channel: bool,
    pub pauli_weights: Vec<LogicalPauliWeight>,
    pub witness: UncorrectablePair,
}

impl Theorem1Verdict {
    /// Largest gap between the channel's Pauli weights and the outcome sum.
    pub fn prediction_error(&self) -> f64 {
        self.pauli_weights
            .iter()
            .map(|w| (w.probability - w.predicted).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self, code: &StabilizerCode, p: Option<f64>) -> String {
        serde_json::to_string_pretty(&serde_json::json!({
            "code": code.name(),
            "code_fingerprint": code.fingerprint(),
            "p": p,
            "violated": self.violated,
            "distance": self.distance,
            "single_round_identity_error": self.single_round_error,
            "logical_channel": {
                "is_pauli_channel": self.is_pauli_channel,
                "pauli_weights": self.pauli_weights,
            },
            "witness": {
                "s1": self.witness.s1.to_string(),
                "s2": self.witness.s2.to_string(),
                "logical": self.witness.logical.to_string(),
                "logical_pauli": self.witness.logical_pauli.to_string(),
            },
        }))
        .expect("plain data serialises")
    }
}

fn pauli_letters(p: &PauliOperator) -> String {
    p.with_phase(0).to_string()
}

/// Checks the hypotheses, then compares both sides of the two-round
/// identity for the noisy recovery with readout model `chi`.
pub fn verify_theorem1(ops: &CodeOperators, chi: &ConfusionMatrix) -> Result<Theorem1Verdict> {
    let code = ops.code();
    if chi.bits() != code.num_syndrome_bits() {
        return Err(Error::Dimension {
            expected: code.num_syndromes(),
            got: chi.size(),
        });
    }
    if !chi.is_strictly_positive() {
        return Err(Error::Hypothesis(
            "confusion matrix has zero entries; strict positivity is required".into(),
        ));
    }
    match code.declared_distance() {
        Some(d) if d >= 3 => {}
        Some(d) => return Err(Error::Hypothesis(format!("declared distance {d} is below 3"))),
        None => return Err(Error::Hypothesis("code has no declared distance".into())),
    }
    let noisy = ops.noisy_recovery(chi)?;
    let single = ops.retraction(&noisy)?;
    let identity = Channel::identity(ops.logical_dim())?;
    let lhs = ops.retraction_of_power(&noisy, 2)?;
    let rhs = single.then(&single)?;
    let distance = lhs.distance(&rhs);

    let mut predicted: std::collections::HashMap<String, f64> = Default::default();
    for s1 in code.syndromes() {
        let w1 = chi.get(&s1, &Syndrome::zero(s1.len()));
        for s2 in code.syndromes() {
            let w2 = chi.get(&s2, &s1);
            let residual = s1.xor(&s2);
            let net = code
                .correction(&residual)
                .mul(code.correction(&s2))?
                .mul(code.correction(&s1))?;
            let logical = code.logical_pauli_of(&net)?;
            *predicted.entry(pauli_letters(&logical)).or_default() += w1 * w2;
        }
    }
    let pauli_weights = lhs
        .pauli_error_probabilities()?
        .into_iter()
        .map(|(q, probability)| {
            let pauli = pauli_letters(&q);
            LogicalPauliWeight {
                predicted: predicted.get(&pauli).copied().unwrap_or(0.0),
                pauli,
                probability,
            }
        })
        .collect();
    Ok(Theorem1Verdict {
        violated: distance > COMPOSABILITY_THRESHOLD,
        distance,
        single_round_error: single.distance(&identity),
        is_pauli_channel: lhs.is_pauli_channel(1e-12)?,
        logical_channel: lhs,
        pauli_weights,
        witness: code.find_uncorrectable_pair()?,
    })
}

/// Ordered pairs of distinct single-ancilla readout errors in consecutive
/// rounds that flip the logical `Z`: `(flipping, total)`.
pub fn two_round_flip_pairs(code: &StabilizerCode) -> Result<(usize, usize)> {
    let z = &code.logical_z()[0];
    let singles: Vec<Syndrome> = code.syndromes().filter(|s| s.weight() == 1).collect();
    let (mut flips, mut total) = (0, 0);
    for e1 in &singles {
        for e2 in singles.iter().filter(|e| *e != e1) {
            // round one reads e1 from the codespace; round two reads e1 ⊕ e2
            let second = e1.xor(e2);
            let net = code
                .correction(e2)
                .mul(code.correction(&second))?
                .mul(code.correction(e1))?;
            total += 1;
            if !net.commutes(z)? {
                flips += 1;
            }
        }
    }
    Ok((flips, total))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeadingOrderRow {
    pub p: f64,
    /// `1 - q_2`.
    pub measured: f64,
    pub predicted: f64,
    /// `None` when the prediction is zero.
    pub ratio: Option<f64>,
}

/// Exact `1 - q_2` next to `2 · p² · (number of flipping readout pairs)`.
pub fn leading_order_report(ops: &CodeOperators, p_list: &[f64]) -> Result<Vec<LeadingOrderRow>> {
    single_logical(ops)?;
    let (flips, _) = two_round_flip_pairs(ops.code())?;
    p_list
        .iter()
        .map(|&p| {
            let q = decay_with(ops, p, 2)?.q;
            let measured = 1.0 - q[2];
            let predicted = 2.0 * p * p * flips as f64;
            Ok(LeadingOrderRow {
                p,
                measured,
                predicted,
                ratio: (predicted > 0.0).then(|| measured / predicted),
            })
        })
        .collect()
}

pub fn leading_order_csv(rows: &[LeadingOrderRow]) -> String {
    let mut out = String::from("p,measured,predicted,ratio\n");
    for r in rows {
        out += &format!(
            "{},{},{},{}\n",
            format_float(r.p),
            format_float(r.measured),
            format_float(r.predicted),
            fmt_opt(r.ratio)
        );
    }
    out
}

fn xy_logical(code: &StabilizerCode, product: &PauliOperator) -> Result<bool> {
    let logical = code.logical_pauli_of(&code.decompose(product)?.logical)?;
    Ok(logical.x_bit(0))
}

/// Products `R(e1 ⊕ e2) · R(e1)` of the corrections applied when single
/// ancilla readouts flip in two consecutive rounds (`e1 ≠ e2`, both of
/// weight one), counted by whether their logical part is X or Y:
/// `(xy, total)`.
pub fn readout_pair_xy_census(code: &StabilizerCode) -> Result<(usize, usize)> {
    if code.k() != 1 {
        return Err(Error::Unsupported("pair census needs one logical qubit".into()));
    }
    let singles: Vec<Syndrome> = code.syndromes().filter(|s| s.weight() == 1).collect();
    let (mut xy, mut total) = (0, 0);
    for e1 in &singles {
        for e2 in singles.iter().filter(|e| *e != e1) {
            let product = code.correction(&e1.xor(e2)).mul(code.correction(e1))?;
            total += 1;
            xy += xy_logical(code, &product)? as usize;
        }
    }
    Ok((xy, total))
}

/// Same census over every unordered pair of distinct non-trivial corrections.
pub fn all_pair_xy_census(code: &StabilizerCode) -> Result<(usize, usize)> {
    if code.k() != 1 {
        return Err(Error::Unsupported("pair census needs one logical qubit".into()));
    }
    let syndromes: Vec<Syndrome> = code.syndromes().filter(|s| !s.is_zero()).collect();
    let (mut xy, mut total) = (0, 0);
    for (i, a) in syndromes.iter().enumerate() {
        for b in &syndromes[i + 1..] {
            let product = code.correction(a).mul(code.correction(b))?;
            total += 1;
            xy += xy_logical(code, &product)? as usize;
        }
    }
    Ok((xy, total))
}

/// Weight-`w` Paulis whose decomposition carries a non-trivial logical:
/// `(failures, total)`.
pub fn decoder_failures_at_weight(code: &StabilizerCode, w: usize) -> Result<(usize, usize)> {
    let (mut fail, mut total) = (0, 0);
    for p in enumerate_paulis(code.n()).filter(|p| p.weight() == w) {
        total += 1;
        if code.is_nontrivial_logical(&code.decompose(&p)?.logical)? {
            fail += 1;
        }
    }
    Ok((fail, total))
}

/// Kraus operators of a random channel on `dim` levels with `rank` Kraus
/// operators, cut from a Gaussian isometry.
pub fn random_kraus(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let rows = dim * rank;
    let mut v: Array2<Complex64> = Array2::from_shape_fn((rows, dim), |_| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    // modified Gram–Schmidt on the columns
    for j in 0..dim {
        for i in 0..j {
            let proj: Complex64 = (0..rows).map(|r| v[[r, i]].conj() * v[[r, j]]).sum();
            for r in 0..rows {
                let vi = v[[r, i]];
                v[[r, j]] -= proj * vi;
            }
        }
        let norm = (0..rows).map(|r| v[[r, j]].norm_sqr()).sum::<f64>().sqrt();
        v.column_mut(j).mapv_inplace(|x| x / norm);
    }
    (0..rank)
        .map(|b| v.slice(ndarray::s![b * dim..(b + 1) * dim, ..]).to_owned())
        .collect()
}

pub fn random_channel(dim: usize, rank: usize, seed: u64) -> Result<Channel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Channel::from_kraus(&random_kraus(dim, rank, &mut rng))
}

/// Outcome of one random trial of the perfect-recovery sufficiency check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SufficiencyTrial {
    pub seed: u64,
    /// Composability distance with ideal recovery after each map.
    pub with_recovery: f64,
    /// The same without the recovery.
    pub without_recovery: f64,
}

pub fn sufficiency_trial(ops: &CodeOperators, seed: u64) -> Result<SufficiencyTrial> {
    let dim = ops.data_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k1 = random_kraus(dim, 2, &mut rng);
    let k2 = random_kraus(dim, 2, &mut rng);
    let recovered = |ks: &[CMatrix]| -> Result<Channel> {
        let mut out = Vec::with_capacity(ks.len() * ops.projectors().len());
        for s in ops.code().syndromes() {
            let r = ops.correction_matrix(&s).dot(ops.projector(&s));
            out.extend(ks.iter().map(|k| r.dot(k)));
        }
        Channel::from_kraus(&out)
    };
    let with_recovery = composability_check(ops, &recovered(&k1)?, &recovered(&k2)?)?.distance;
    let without_recovery =
        composability_check(ops, &Channel::from_kraus(&k1)?, &Channel::from_kraus(&k2)?)?.distance;
    Ok(SufficiencyTrial {
        seed,
        with_recovery,
        without_recovery,
    })
}

/// `ε_∞` estimate and the per-round rate of the last decaying mode, from a
/// log-linear fit of `q_m` over `window`.
pub fn asymptotic_decay_rate(q: &[f64], window: std::ops::RangeInclusive<usize>) -> (f64, f64) {
    let xs: Vec<f64> = window.clone().map(|m| m as f64).collect();
    let ys: Vec<f64> = window.map(|m| q[m].abs().ln()).collect();
    let (slope, _, r2) = linear_fit(&xs, &ys);
    (slope.exp(), r2)
}

/// Dense check that `E† l E` equals the logical Pauli assigned to `l`.
pub fn logical_action_error(ops: &CodeOperators, l: &PauliOperator) -> Result<f64> {
    let e = ops.isometry();
    let action = dagger(e).dot(&l.dense()?).dot(e);
    let expected = ops.code().logical_pauli_of(l)?.dense()?;
    Ok(crate::linalg::max_abs_diff(&action, &expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin_rep3;

    #[test]
    fn decay_record_fields() {
        let rec = polarization_sequence(&builtin_rep3(), 0.1, 5).unwrap();
        assert_eq!(rec.q.len(), 6);
        assert!((rec.q[0] - 1.0).abs() < 1e-12);
        assert!((rec.q[1] - 1.0).abs() < 1e-12);
        assert!(rec.q[2] < 1.0);
        assert!(rec.eps[5].is_none() && rec.deps[4].is_none());
        assert!(rec.eps[1].unwrap() > 0.0);
        let back = DecayRecord::from_csv(&rec.to_csv()).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn zero_noise_keeps_full_polarization() {
        let rec = polarization_sequence(&builtin_rep3(), 0.0, 10).unwrap();
        assert!(rec.q.iter().all(|&q| (q - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rep3_circuit_agreement() {
        let rec = polarization_sequence(&builtin_rep3(), 0.1, 6).unwrap();
        for m in 0..=6 {
            assert!((rec.q[m] - circuit_oracle(0.1, m).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn theorem_hypotheses() {
        let ops = CodeOperators::new(&builtin_rep3()).unwrap();
        let err = verify_theorem1(&ops, &ConfusionMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        let v = verify_theorem1(&ops, &ConfusionMatrix::bitflip(2, 0.1).unwrap()).unwrap();
        assert!(v.violated);
        assert!(v.prediction_error() < 1e-12);
        let x = v.pauli_weights.iter().find(|w| w.pauli == "X").unwrap();
        assert!(x.probability > 0.0);
    }

    #[test]
    fn five_qubit_pair_census() {
        let five = crate::code::builtin_five_qubit();
        assert_eq!(readout_pair_xy_census(&five).unwrap(), (6, 12));
        assert_eq!(all_pair_xy_census(&five).unwrap().1, 105);
        assert_eq!(decoder_failures_at_weight(&five, 2).unwrap(), (90, 90));
    }

    #[test]
    fn rep3_flip_pairs() {
        assert_eq!(two_round_flip_pairs(&builtin_rep3()).unwrap(), (2, 2));
    }

    #[test]
    fn linear_fit_exact_line() {
        let (m, b, r2) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((m - 2.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_kraus_is_trace_preserving() {
        let ch = random_channel(4, 2, 7).unwrap();
        assert!(ch.verify_cptp(1e-10).is_cptp());
        assert_eq!(ch, random_channel(4, 2, 7).unwrap());
    }
}
