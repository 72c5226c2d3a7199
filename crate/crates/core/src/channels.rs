//! Dense operators and superoperators for encoding, syndrome extraction,
//! recovery and decoding.
//!
//! Channels act on column-stacked operators: `vec(ρ)[i + rows * j] = ρ[i, j]`,
//! so a Kraus operator `K` contributes `conj(K) ⊗ K` and sequential
//! application is a plain matrix product.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::code::{StabilizerCode, Syndrome};
use crate::error::{check_probability, Error, Result};
use crate::linalg::{
    dagger, hermitian_eigenvalues, identity, is_psd_within, kron, max_abs_diff, trace,
    unvectorize, vectorize, CMatrix, ONE, ZERO,
};
use crate::pauli::{enumerate_paulis, PauliOperator, MAX_DENSE_QUBITS};

/// Default tolerance for trace preservation and Choi positivity.
pub const CPTP_TOLERANCE: f64 = 1e-10;

/// Largest Choi matrix whose spectrum is computed exactly; larger ones get a
/// Cholesky positivity certificate instead.
pub const EXACT_CHOI_LIMIT: usize = 256;

fn is_power_of_two(d: usize) -> bool {
    d != 0 && d & (d - 1) == 0
}

/// Dense complex matrix with power-of-two dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(CMatrix);

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (r, c) = matrix.dim();
        if !is_power_of_two(r) || !is_power_of_two(c) {
            return Err(Error::Domain(format!(
                "operator dimensions {r}x{c} are not powers of two"
            )));
        }
        if matrix.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("operator has non-finite entries".into()));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn dagger(&self) -> Self {
        Self(dagger(&self.0))
    }

    pub fn to_json(&self) -> String {
        let json = OperatorJson {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.0.iter().map(|v| [v.re, v.im]).collect(),
        };
        serde_json::to_string(&json).expect("plain data serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: OperatorJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: e.column(),
            message: e.to_string(),
        })?;
        let values: Vec<Complex64> = json.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let m = Array2::from_shape_vec((json.rows, json.cols), values).map_err(|_| Error::Dimension {
            expected: json.rows * json.cols,
            got: json.entries.len(),
        })?;
        Self::new(m)
    }
}

/// Outcome of [`Channel::verify_cptp`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CptpReport {
    pub trace_preservation_error: f64,
    /// Exact minimum Choi eigenvalue when the Choi matrix is small enough.
    pub choi_min_eigenvalue: Option<f64>,
    pub trace_preserving: bool,
    pub completely_positive: bool,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

/// Linear map between operator spaces in column-stacked form.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    in_dim: usize,
    out_dim: usize,
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    in_dim: usize,
    out_dim: usize,
    representation: String,
    entries: Vec<[f64; 2]>,
}

impl Channel {
    pub fn from_matrix(in_dim: usize, out_dim: usize, matrix: CMatrix) -> Result<Self> {
        if !is_power_of_two(in_dim) || !is_power_of_two(out_dim) {
            return Err(Error::InvalidChannel(format!(
                "dimensions {in_dim} -> {out_dim} are not powers of two"
            )));
        }
        if matrix.dim() != (out_dim * out_dim, in_dim * in_dim) {
            return Err(Error::Dimension {
                expected: out_dim * out_dim,
                got: matrix.nrows(),
            });
        }
        Ok(Self {
            in_dim,
            out_dim,
            matrix,
        })
    }

    /// Builds `ρ ↦ Σ K ρ K†`; every operator must have the same shape.
    pub fn from_kraus(ops: &[CMatrix]) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus set".into()))?;
        let (out_dim, in_dim) = first.dim();
        let mut matrix = Array2::zeros((out_dim * out_dim, in_dim * in_dim));
        for k in ops {
            if k.dim() != (out_dim, in_dim) {
                return Err(Error::Dimension {
                    expected: out_dim,
                    got: k.nrows(),
                });
            }
            matrix += &kron(&k.mapv(|v| v.conj()), k);
        }
        Self::from_matrix(in_dim, out_dim, matrix)
    }

    /// Tabulates a linear map from its action on the matrix units `|i⟩⟨j|`.
    pub fn from_map(
        in_dim: usize,
        out_dim: usize,
        f: impl Fn(&CMatrix) -> CMatrix,
    ) -> Result<Self> {
        let mut matrix = Array2::zeros((out_dim * out_dim, in_dim * in_dim));
        for j in 0..in_dim {
            for i in 0..in_dim {
                let mut unit = Array2::zeros((in_dim, in_dim));
                unit[[i, j]] = ONE;
                let image = f(&unit);
                if image.dim() != (out_dim, out_dim) {
                    return Err(Error::Dimension {
                        expected: out_dim,
                        got: image.nrows(),
                    });
                }
                matrix
                    .column_mut(i + in_dim * j)
                    .assign(&vectorize(&image));
            }
        }
        Self::from_matrix(in_dim, out_dim, matrix)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_matrix(dim, dim, identity(dim * dim))
    }

    pub fn unitary(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.dim() != (self.in_dim, self.in_dim) {
            return Err(Error::Dimension {
                expected: self.in_dim,
                got: rho.nrows(),
            });
        }
        let v = self.matrix.dot(&vectorize(rho));
        Ok(unvectorize(&v, self.out_dim, self.out_dim))
    }

    /// Heisenberg-picture action on an observable of the output space.
    pub fn dual_apply(&self, observable: &CMatrix) -> Result<CMatrix> {
        if observable.dim() != (self.out_dim, self.out_dim) {
            return Err(Error::Dimension {
                expected: self.out_dim,
                got: observable.nrows(),
            });
        }
        let v = vectorize(observable);
        let w: Array1<Complex64> = self.matrix.t().dot(&v.mapv(|x| x.conj())).mapv(|x| x.conj());
        Ok(unvectorize(&w, self.in_dim, self.in_dim))
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if next.in_dim != self.out_dim {
            return Err(Error::Dimension {
                expected: self.out_dim,
                got: next.in_dim,
            });
        }
        Self::from_matrix(self.in_dim, next.out_dim, next.matrix.dot(&self.matrix))
    }

    /// `self` applied `m` times (identity for `m = 0`).
    pub fn power(&self, m: usize) -> Result<Channel> {
        if self.in_dim != self.out_dim {
            return Err(Error::Dimension {
                expected: self.in_dim,
                got: self.out_dim,
            });
        }
        let mut acc = Channel::identity(self.in_dim)?;
        for _ in 0..m {
            acc = acc.then(self)?;
        }
        Ok(acc)
    }

    /// Choi matrix `Σ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)` with the input factor first.
    pub fn choi(&self) -> CMatrix {
        let (din, dout) = (self.in_dim, self.out_dim);
        Array2::from_shape_fn((din * dout, din * dout), |(r, c)| {
            let (i, a) = (r / dout, r % dout);
            let (j, b) = (c / dout, c % dout);
            self.matrix[[a + dout * b, i + din * j]]
        })
    }

    /// Max-abs deviation of `Λ†(I)` from `I`.
    pub fn trace_preservation_error(&self) -> f64 {
        let dual = self
            .dual_apply(&identity(self.out_dim))
            .expect("dimensions are consistent");
        max_abs_diff(&dual, &identity(self.in_dim))
    }

    /// Exact smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub fn choi_min_eigenvalue(&self) -> f64 {
        let j = self.choi();
        let herm = (&j + &dagger(&j)).mapv(|v| v * 0.5);
        hermitian_eigenvalues(&herm)[0]
    }

    pub fn verify_cptp(&self, tol: f64) -> CptpReport {
        let tp = self.trace_preservation_error();
        let dim = self.in_dim * self.out_dim;
        let (min_eig, cp) = if dim <= EXACT_CHOI_LIMIT {
            let e = self.choi_min_eigenvalue();
            (Some(e), e >= -tol)
        } else {
            (None, is_psd_within(&self.choi(), tol))
        };
        CptpReport {
            trace_preservation_error: tp,
            choi_min_eigenvalue: min_eig,
            trace_preserving: tp < tol,
            completely_positive: cp,
        }
    }

    /// Max-abs entrywise distance between channel matrices; `inf` when the
    /// channels act on different spaces.
    pub fn distance(&self, other: &Channel) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    fn num_qubits(&self) -> Result<usize> {
        if self.in_dim != self.out_dim {
            return Err(Error::Dimension {
                expected: self.in_dim,
                got: self.out_dim,
            });
        }
        let n = self.in_dim.trailing_zeros() as usize;
        if n > 3 {
            return Err(Error::Capacity {
                what: "qubits for the Pauli transfer view",
                got: n,
                limit: 3,
            });
        }
        Ok(n)
    }

    /// Pauli transfer matrix `T[a][b] = Tr(P_a Λ(P_b)) / d`, with Paulis in
    /// lexicographic order (I < X < Y < Z, qubit 0 most significant).
    pub fn pauli_transfer_matrix(&self) -> Result<Array2<f64>> {
        let n = self.num_qubits()?;
        let d = self.in_dim as f64;
        let basis: Vec<CMatrix> = enumerate_paulis(n).map(|p| p.dense().expect("small")).collect();
        let images: Vec<CMatrix> = basis.iter().map(|p| self.apply(p).expect("square")).collect();
        Ok(Array2::from_shape_fn((basis.len(), basis.len()), |(a, b)| {
            (trace(&basis[a].dot(&images[b])) / d).re
        }))
    }

    /// True when the transfer matrix is diagonal to within `tol`.
    pub fn is_pauli_channel(&self, tol: f64) -> Result<bool> {
        let ptm = self.pauli_transfer_matrix()?;
        Ok(ptm
            .indexed_iter()
            .all(|((a, b), v)| a == b || v.abs() <= tol))
    }

    /// Mixture weights `p_Q` of `ρ ↦ Σ_Q p_Q Q ρ Q`, read off the transfer
    /// diagonal. Meaningful only for Pauli channels.
    pub fn pauli_error_probabilities(&self) -> Result<Vec<(PauliOperator, f64)>> {
        let n = self.num_qubits()?;
        let ptm = self.pauli_transfer_matrix()?;
        let paulis: Vec<PauliOperator> = enumerate_paulis(n).collect();
        let d2 = (paulis.len()) as f64;
        Ok(paulis
            .iter()
            .map(|q| {
                let s: f64 = paulis
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let sign = if p.symplectic_product(q).expect("same n") { -1.0 } else { 1.0 };
                        sign * ptm[[i, i]]
                    })
                    .sum();
                (q.clone(), s / d2)
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        let json = ChannelJson {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            representation: "column-stacked".into(),
            entries: self.matrix.iter().map(|v| [v.re, v.im]).collect(),
        };
        serde_json::to_string(&json).expect("plain data serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: ChannelJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            position: e.column(),
            message: e.to_string(),
        })?;
        if json.representation != "column-stacked" {
            return Err(Error::Unsupported(format!(
                "channel representation {:?}",
                json.representation
            )));
        }
        let (r, c) = (json.out_dim * json.out_dim, json.in_dim * json.in_dim);
        let values: Vec<Complex64> = json.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let m = Array2::from_shape_vec((r, c), values).map_err(|_| Error::Dimension {
            expected: r * c,
            got: json.entries.len(),
        })?;
        Self::from_matrix(json.in_dim, json.out_dim, m)
    }
}

/// Column-stochastic readout model; entry `[measured][actual]` is
/// `Pr(measured | actual)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfusionMatrix {
    bits: usize,
    m: Array2<f64>,
}

impl ConfusionMatrix {
    pub fn new(m: Array2<f64>) -> Result<Self> {
        let size = m.nrows();
        if m.ncols() != size || !is_power_of_two(size) {
            return Err(Error::Domain(format!(
                "confusion matrix must be square with power-of-two size, got {:?}",
                m.dim()
            )));
        }
        if let Some(v) = m.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("confusion entry {v} is not a probability")));
        }
        for (j, col) in m.axis_iter(Axis(1)).enumerate() {
            let sum: f64 = col.sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("confusion column {j} sums to {sum}")));
            }
        }
        Ok(Self {
            bits: size.trailing_zeros() as usize,
            m,
        })
    }

    pub fn identity(bits: usize) -> Self {
        Self {
            bits,
            m: Array2::eye(1 << bits),
        }
    }

    /// Independent flips of each syndrome bit with probability `p`.
    pub fn bitflip(bits: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        let size = 1usize << bits;
        let m = Array2::from_shape_fn((size, size), |(a, b)| {
            let h = (a ^ b).count_ones() as i32;
            (1.0 - p).powi(bits as i32 - h) * p.powi(h)
        });
        Ok(Self { bits, m })
    }

    /// Deterministic readout `s ↦ s ⊕ e`.
    pub fn shift(e: &Syndrome) -> Self {
        let size = 1usize << e.len();
        let m = Array2::from_shape_fn((size, size), |(a, b)| {
            if a as u64 == b as u64 ^ e.value() { 1.0 } else { 0.0 }
        });
        Self { bits: e.len(), m }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.m
    }

    pub fn get(&self, measured: &Syndrome, actual: &Syndrome) -> f64 {
        self.m[[measured.index(), actual.index()]]
    }

    /// Every entry strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.m.iter().all(|&v| v > 0.0)
    }
}

/// Rep3 bit-flip readout for a code: `bitflip(n - k, p)`.
pub fn bitflip_confusion(code: &StabilizerCode, p: f64) -> Result<ConfusionMatrix> {
    ConfusionMatrix::bitflip(code.num_syndrome_bits(), p)
}

fn check_dense(code: &StabilizerCode) -> Result<()> {
    if code.n() > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "data qubits for dense channels",
            got: code.n(),
            limit: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

fn dense(p: &PauliOperator) -> CMatrix {
    p.dense().expect("size checked by caller")
}

/// `Π_s = Π_j (I + (-1)^{s_j} g_j) / 2`.
pub fn syndrome_projector(code: &StabilizerCode, s: &Syndrome) -> Result<Operator> {
    check_dense(code)?;
    if s.len() != code.num_syndrome_bits() {
        return Err(Error::Dimension {
            expected: code.num_syndrome_bits(),
            got: s.len(),
        });
    }
    let dim = 1usize << code.n();
    let id = identity(dim);
    let mut proj = id.clone();
    for (j, g) in code.generators().iter().enumerate() {
        let sign = if s.bit(j) { -0.5 } else { 0.5 };
        let factor = &id * Complex64::new(0.5, 0.0) + dense(g) * Complex64::new(sign, 0.0);
        proj = proj.dot(&factor);
    }
    Operator::new(proj)
}

/// Isometry onto the codespace; column `j` is the encoded basis state whose
/// `Z̄_i` eigenvalues spell `j` (logical qubit 0 most significant).
pub fn encoding_isometry(code: &StabilizerCode) -> Result<Operator> {
    check_dense(code)?;
    let dim = 1usize << code.n();
    let id = identity(dim);
    let mut proj = syndrome_projector(code, &Syndrome::zero(code.num_syndrome_bits()))?.into_matrix();
    for z in code.logical_z() {
        proj = proj.dot(&((&id + &dense(z)) * Complex64::new(0.5, 0.0)));
    }
    // rank one: any non-zero column spans the logical |0…0⟩
    let col = (0..dim)
        .max_by(|&a, &b| {
            let na: f64 = proj.column(a).iter().map(|v| v.norm_sqr()).sum();
            let nb: f64 = proj.column(b).iter().map(|v| v.norm_sqr()).sum();
            na.total_cmp(&nb).then(b.cmp(&a))
        })
        .expect("non-empty");
    let mut zero = proj.column(col).to_owned();
    let norm = zero.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let pivot = zero
        .iter()
        .copied()
        .reduce(|a, b| if b.norm() > a.norm() + 1e-12 { b } else { a })
        .expect("non-empty");
    let phase = pivot.conj() / pivot.norm();
    zero.mapv_inplace(|v| v * phase / norm);
    let k = code.k();
    let mut e = Array2::zeros((dim, 1 << k));
    for j in 0..1usize << k {
        let mut v = zero.clone();
        for (i, x) in code.logical_x().iter().enumerate() {
            if j >> (k - 1 - i) & 1 == 1 {
                v = dense(x).dot(&v);
            }
        }
        e.column_mut(j).assign(&v);
    }
    Operator::new(e)
}

/// Dense operators and channels for a code, computed once.
#[derive(Clone, Debug)]
pub struct CodeOperators {
    code: StabilizerCode,
    isometry: CMatrix,
    projectors: Vec<CMatrix>,
    corrections: Vec<CMatrix>,
    encoding: Channel,
    decoding: Channel,
    recovery: Channel,
}

impl CodeOperators {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        check_dense(code)?;
        let isometry = encoding_isometry(code)?.into_matrix();
        let projectors = code
            .syndromes()
            .map(|s| syndrome_projector(code, &s).map(Operator::into_matrix))
            .collect::<Result<Vec<_>>>()?;
        let corrections: Vec<CMatrix> = code.corrections().iter().map(dense).collect();
        let recovery_kraus: Vec<CMatrix> = corrections
            .iter()
            .zip(&projectors)
            .map(|(r, p)| r.dot(p))
            .collect();
        let recovery = Channel::from_kraus(&recovery_kraus)?;
        let encoding = Channel::from_kraus(std::slice::from_ref(&isometry))?;
        let e_dag = dagger(&isometry);
        let decoding_kraus: Vec<CMatrix> = recovery_kraus.iter().map(|k| e_dag.dot(k)).collect();
        let decoding = Channel::from_kraus(&decoding_kraus)?;
        Ok(Self {
            code: code.clone(),
            isometry,
            projectors,
            corrections,
            encoding,
            decoding,
            recovery,
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn data_dim(&self) -> usize {
        1 << self.code.n()
    }

    pub fn logical_dim(&self) -> usize {
        1 << self.code.k()
    }

    pub fn isometry(&self) -> &CMatrix {
        &self.isometry
    }

    /// Projectors indexed by [`Syndrome::index`].
    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn projector(&self, s: &Syndrome) -> &CMatrix {
        &self.projectors[s.index()]
    }

    pub fn correction_matrix(&self, s: &Syndrome) -> &CMatrix {
        &self.corrections[s.index()]
    }

    /// `ℰ(ρ) = E ρ E†`.
    pub fn encoding(&self) -> &Channel {
        &self.encoding
    }

    /// `𝒟 = ℰ† ∘ 𝓡`.
    pub fn decoding(&self) -> &Channel {
        &self.decoding
    }

    /// Ideal recovery `Σ_s R(s) Π_s ρ Π_s R(s)†`.
    pub fn recovery(&self) -> &Channel {
        &self.recovery
    }

    /// Kraus operators `√χ[s'][s] R(s') Π_s` of the noisy recovery.
    pub fn noisy_recovery_kraus(&self, chi: &ConfusionMatrix) -> Result<Vec<CMatrix>> {
        if chi.bits() != self.code.num_syndrome_bits() {
            return Err(Error::Dimension {
                expected: self.code.num_syndromes(),
                got: chi.size(),
            });
        }
        let mut kraus = Vec::new();
        for s in self.code.syndromes() {
            for s2 in self.code.syndromes() {
                let w = chi.get(&s2, &s);
                if w > 0.0 {
                    let k = self.correction_matrix(&s2).dot(self.projector(&s));
                    kraus.push(k * Complex64::new(w.sqrt(), 0.0));
                }
            }
        }
        Ok(kraus)
    }

    /// `𝓡̃(ρ) = Σ χ[s'][s] R(s') Π_s ρ Π_s R(s')†`.
    pub fn noisy_recovery(&self, chi: &ConfusionMatrix) -> Result<Channel> {
        Channel::from_kraus(&self.noisy_recovery_kraus(chi)?)
    }

    /// `Ω[Λ] = 𝒟 ∘ Λ ∘ ℰ`.
    pub fn retraction(&self, lambda: &Channel) -> Result<Channel> {
        self.retraction_of_sequence(&[lambda])
    }

    /// `Ω[Λ_last ∘ … ∘ Λ_first]` evaluated without forming the physical
    /// composite; `maps[0]` acts first.
    pub fn retraction_of_sequence(&self, maps: &[&Channel]) -> Result<Channel> {
        let mut acc = self.encoding.matrix.clone();
        for lambda in maps {
            if lambda.in_dim != self.data_dim() || lambda.out_dim != self.data_dim() {
                return Err(Error::Dimension {
                    expected: self.data_dim(),
                    got: lambda.in_dim,
                });
            }
            acc = lambda.matrix.dot(&acc);
        }
        let d = self.logical_dim();
        Channel::from_matrix(d, d, self.decoding.matrix.dot(&acc))
    }

    /// `Ω[Λ^m]`.
    pub fn retraction_of_power(&self, lambda: &Channel, m: usize) -> Result<Channel> {
        let mut acc = self.encoding.matrix.clone();
        for _ in 0..m {
            acc = lambda.matrix.dot(&acc);
        }
        let d = self.logical_dim();
        Channel::from_matrix(d, d, self.decoding.matrix.dot(&acc))
    }

    /// `U_E (|s⟩ ⊗ |ψ⟩) = R(s)† E |ψ⟩`, syndrome register as the high-order factor.
    pub fn encoding_unitary(&self) -> CMatrix {
        let d = self.logical_dim();
        let mut u = Array2::zeros((self.data_dim(), self.data_dim()));
        for s in self.code.syndromes() {
            let block = dagger(self.correction_matrix(&s)).dot(&self.isometry);
            for j in 0..d {
                u.column_mut(s.index() * d + j).assign(&block.column(j));
            }
        }
        u
    }

    /// `ρ ↦ Tr_Syn(U_E† ρ U_E)`, computed by explicit partial trace.
    pub fn syndrome_trace_channel(&self) -> Result<Channel> {
        let u = self.encoding_unitary();
        let u_dag = dagger(&u);
        let d = self.logical_dim();
        let ns = self.code.num_syndromes();
        Channel::from_map(self.data_dim(), d, |rho| {
            let full = u_dag.dot(rho).dot(&u);
            Array2::from_shape_fn((d, d), |(a, b)| {
                (0..ns).map(|s| full[[s * d + a, s * d + b]]).sum()
            })
        })
    }

    /// `ρ_L ↦ U_E (ρ_Syn ⊗ ρ_L) U_E†`.
    pub fn generalized_encoding(&self, rho_syn: &CMatrix) -> Result<Channel> {
        validate_state(rho_syn, self.code.num_syndromes())?;
        let u = self.encoding_unitary();
        let u_dag = dagger(&u);
        let d = self.logical_dim();
        Channel::from_map(d, self.data_dim(), |rho| u.dot(&kron(rho_syn, rho)).dot(&u_dag))
    }

    /// `𝒟 ∘ Λ ∘ ℰ_{ρ_Syn}`.
    pub fn generalized_retraction(&self, rho_syn: &CMatrix, lambda: &Channel) -> Result<Channel> {
        let enc = self.generalized_encoding(rho_syn)?;
        let inner = lambda.matrix.dot(&enc.matrix);
        let d = self.logical_dim();
        Channel::from_matrix(d, d, self.decoding.matrix.dot(&inner))
    }

    /// Largest deviation of `Π₀ R(s')† R(s) Π₀` from `δ_{ss'} Π₀`.
    pub fn correction_orthogonality_error(&self) -> f64 {
        let p0 = &self.projectors[0];
        let mut worst: f64 = 0.0;
        for (a, ra) in self.corrections.iter().enumerate() {
            for (b, rb) in self.corrections.iter().enumerate() {
                let lhs = p0.dot(&dagger(rb)).dot(ra).dot(p0);
                let err = if a == b {
                    max_abs_diff(&lhs, p0)
                } else {
                    lhs.iter().map(|v| v.norm()).fold(0.0, f64::max)
                };
                worst = worst.max(err);
            }
        }
        worst
    }

    /// Worst deviation from `Σ Π_s = I` and `Π_s Π_t = δ Π_s`.
    pub fn projector_error(&self) -> f64 {
        let dim = self.data_dim();
        let mut sum = Array2::<Complex64>::zeros((dim, dim));
        let mut worst: f64 = 0.0;
        for (a, pa) in self.projectors.iter().enumerate() {
            sum += pa;
            for (b, pb) in self.projectors.iter().enumerate() {
                let prod = pa.dot(pb);
                let err = if a == b {
                    max_abs_diff(&prod, pa)
                } else {
                    prod.iter().map(|v| v.norm()).fold(0.0, f64::max)
                };
                worst = worst.max(err);
            }
        }
        worst.max(max_abs_diff(&sum, &identity(dim)))
    }
}

/// Hermitian, unit trace, and no eigenvalue below `-1e-10`.
pub fn validate_state(rho: &CMatrix, dim: usize) -> Result<()> {
    if rho.dim() != (dim, dim) {
        return Err(Error::Dimension {
            expected: dim,
            got: rho.nrows(),
        });
    }
    if max_abs_diff(rho, &dagger(rho)) > 1e-12 {
        return Err(Error::Domain("state is not Hermitian".into()));
    }
    let tr = trace(rho);
    if (tr - ONE).norm() > 1e-10 {
        return Err(Error::Domain(format!("state has trace {tr}")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -1e-10 {
        return Err(Error::Domain(format!("state has eigenvalue {min}")));
    }
    Ok(())
}

pub fn recovery_map(code: &StabilizerCode) -> Result<Channel> {
    Ok(CodeOperators::new(code)?.recovery)
}

pub fn noisy_recovery_map(code: &StabilizerCode, chi: &ConfusionMatrix) -> Result<Channel> {
    CodeOperators::new(code)?.noisy_recovery(chi)
}

pub fn encoding_operation(code: &StabilizerCode) -> Result<Channel> {
    Ok(CodeOperators::new(code)?.encoding)
}

pub fn decoding_operation(code: &StabilizerCode) -> Result<Channel> {
    Ok(CodeOperators::new(code)?.decoding)
}

pub fn gadget_retraction(code: &StabilizerCode, lambda: &Channel) -> Result<Channel> {
    CodeOperators::new(code)?.retraction(lambda)
}

pub fn encoding_unitary(code: &StabilizerCode) -> Result<Operator> {
    Operator::new(CodeOperators::new(code)?.encoding_unitary())
}

pub fn generalized_retraction(
    code: &StabilizerCode,
    rho_syn: &CMatrix,
    lambda: &Channel,
) -> Result<Channel> {
    CodeOperators::new(code)?.generalized_retraction(rho_syn, lambda)
}

/// Pure computational basis state `|index⟩⟨index|`.
pub fn basis_state(dim: usize, index: usize) -> CMatrix {
    let mut m = Array2::zeros((dim, dim));
    m[[index, index]] = ONE;
    m
}

/// The zero matrix, for readability at call sites.
pub fn zeros(dim: usize) -> CMatrix {
    Array2::from_elem((dim, dim), ZERO)
}
