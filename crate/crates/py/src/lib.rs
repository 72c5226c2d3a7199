//! Python module `qecmarkov`.

use std::sync::OnceLock;

use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qecmarkov::channels::{self, CodeOperators};
use qecmarkov::experiments;
use qecmarkov::linalg::CMatrix;
use qecmarkov::markov;

fn err(e: qecmarkov::Error) -> PyErr {
    match e {
        qecmarkov::Error::Capacity { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Pauli", module = "qecmarkov", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPauli(qecmarkov::PauliOperator);

#[pymethods]
impl PyPauli {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        qecmarkov::parse_pauli(text).map(Self).map_err(err)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    /// Exponent `k` of the global factor `i^k`.
    #[getter]
    fn phase(&self) -> u8 {
        self.0.phase()
    }

    fn commutes(&self, other: &Self) -> PyResult<bool> {
        self.0.commutes(&other.0).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.mul(&other.0).map(Self).map_err(err)
    }

    fn dense(&self) -> PyResult<Vec<Vec<Complex64>>> {
        self.0.dense().map(|m| rows(&m)).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pauli('{}')", self.0)
    }
}

#[pyclass(name = "StabilizerCode", module = "qecmarkov", frozen)]
struct PyCode {
    code: qecmarkov::StabilizerCode,
    ops: OnceLock<CodeOperators>,
}

impl PyCode {
    fn wrap(code: qecmarkov::StabilizerCode) -> Self {
        Self { code, ops: OnceLock::new() }
    }

    fn ops(&self) -> PyResult<&CodeOperators> {
        if let Some(ops) = self.ops.get() {
            return Ok(ops);
        }
        let ops = CodeOperators::new(&self.code).map_err(err)?;
        Ok(self.ops.get_or_init(|| ops))
    }

    fn noisy(&self, p: f64) -> PyResult<qecmarkov::channels::Channel> {
        let chi = channels::bitflip_confusion(&self.code, p).map_err(err)?;
        self.ops()?.noisy_recovery(&chi).map_err(err)
    }
}

#[pymethods]
impl PyCode {
    #[staticmethod]
    fn rep3() -> Self {
        Self::wrap(qecmarkov::builtin_rep3())
    }

    #[staticmethod]
    fn five_qubit() -> Self {
        Self::wrap(qecmarkov::builtin_five_qubit())
    }

    /// Parses the plain-text code format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        qecmarkov::parse_code_file(text).map(Self::wrap).map_err(err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.code.name()
    }

    #[getter]
    fn n(&self) -> usize {
        self.code.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.code.k()
    }

    #[getter]
    fn generators(&self) -> Vec<PyPauli> {
        self.code.generators().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_x(&self) -> Vec<PyPauli> {
        self.code.logical_x().iter().cloned().map(PyPauli).collect()
    }

    #[getter]
    fn logical_z(&self) -> Vec<PyPauli> {
        self.code.logical_z().iter().cloned().map(PyPauli).collect()
    }

    fn syndrome_of(&self, p: &PyPauli) -> PyResult<String> {
        self.code.syndrome_of(&p.0).map(|s| s.to_string()).map_err(err)
    }

    fn correction(&self, syndrome: &str) -> PyResult<PyPauli> {
        let s: qecmarkov::Syndrome = syndrome.parse().map_err(err)?;
        if s.len() != self.code.num_syndrome_bits() {
            return Err(PyValueError::new_err("syndrome length does not match the code"));
        }
        Ok(PyPauli(self.code.correction(&s).clone()))
    }

    /// `(syndrome, logical, correction)` with `logical * correction` equal to the input.
    fn decompose(&self, p: &PyPauli) -> PyResult<(String, PyPauli, PyPauli)> {
        let d = self.code.decompose(&p.0).map_err(err)?;
        Ok((d.syndrome.to_string(), PyPauli(d.logical), PyPauli(d.correction)))
    }

    /// `(s1, s2, logical_pauli)` for the first pair whose corrections multiply to a logical error.
    fn find_uncorrectable_pair(&self) -> PyResult<(String, String, PyPauli)> {
        let w = self.code.find_uncorrectable_pair().map_err(err)?;
        Ok((w.s1.to_string(), w.s2.to_string(), PyPauli(w.logical_pauli)))
    }

    fn to_code_file(&self) -> String {
        self.code.to_code_file()
    }

    fn fingerprint(&self) -> String {
        self.code.fingerprint()
    }

    fn recovery(&self) -> PyResult<PyChannel> {
        Ok(PyChannel(self.ops()?.recovery().clone()))
    }

    /// Lookup recovery with each syndrome bit flipped independently with probability `p`.
    fn noisy_recovery(&self, p: f64) -> PyResult<PyChannel> {
        self.noisy(p).map(PyChannel)
    }

    fn encoding(&self) -> PyResult<PyChannel> {
        Ok(PyChannel(self.ops()?.encoding().clone()))
    }

    fn decoding(&self) -> PyResult<PyChannel> {
        Ok(PyChannel(self.ops()?.decoding().clone()))
    }

    /// Logical channel `D ∘ channel ∘ E`.
    fn retraction(&self, channel: &PyChannel) -> PyResult<PyChannel> {
        self.ops()?.retraction(&channel.0).map(PyChannel).map_err(err)
    }

    fn encoding_unitary(&self) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(&self.ops()?.encoding_unitary()))
    }

    /// `(distance, violated)` comparing the retraction of `g_b ∘ g_a` with the composed retractions.
    fn composability(&self, g_a: &PyChannel, g_b: &PyChannel) -> PyResult<(f64, bool)> {
        let r = experiments::composability_check(self.ops()?, &g_a.0, &g_b.0).map_err(err)?;
        Ok((r.distance, r.violated))
    }

    fn polarization(&self, p: f64, rounds: usize) -> PyResult<Vec<f64>> {
        Ok(experiments::decay_with(self.ops()?, p, rounds).map_err(err)?.q)
    }

    fn decay_csv(&self, p: f64, rounds: usize) -> PyResult<String> {
        Ok(experiments::decay_with(self.ops()?, p, rounds).map_err(err)?.to_csv())
    }

    fn verify_theorem1<'py>(&self, py: Python<'py>, p: f64) -> PyResult<Bound<'py, PyAny>> {
        let chi = channels::bitflip_confusion(&self.code, p).map_err(err)?;
        let verdict = experiments::verify_theorem1(self.ops()?, &chi).map_err(err)?;
        from_json(py, &verdict.to_json(&self.code, Some(p)))
    }

    /// `(states, matrix)` of the classical chain, `matrix[to][from]`.
    fn transition_matrix(&self, p: f64) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
        let tm = markov::transition_matrix(&self.code, &self.noisy(p)?).map_err(err)?;
        let m = tm.matrix().rows().into_iter().map(|r| r.to_vec()).collect();
        Ok((tm.states().to_vec(), m))
    }

    fn spectral_summary<'py>(&self, py: Python<'py>, p: f64) -> PyResult<Bound<'py, PyDict>> {
        let tm = markov::transition_matrix(&self.code, &self.noisy(p)?).map_err(err)?;
        let s = markov::spectral_summary(&tm);
        let d = PyDict::new(py);
        d.set_item("eigenvalues", s.eigenvalues)?;
        d.set_item("spectral_radius", s.spectral_radius)?;
        d.set_item("second_largest_modulus", s.second_largest_modulus)?;
        d.set_item("subdominant_ratio", s.subdominant_ratio)?;
        Ok(d)
    }

    fn cube_graph_dot(&self, p: f64) -> PyResult<String> {
        markov::cube_graph(&self.code, p).map(|g| g.to_dot()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("StabilizerCode('{}', n={}, k={})", self.code.name(), self.code.n(), self.code.k())
    }
}

#[pyclass(name = "Channel", module = "qecmarkov", frozen)]
struct PyChannel(qecmarkov::channels::Channel);

#[pymethods]
impl PyChannel {
    #[staticmethod]
    fn from_kraus(ops: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let mut mats = Vec::with_capacity(ops.len());
        for k in ops {
            let (r, c) = (k.len(), k.first().map_or(0, Vec::len));
            if k.iter().any(|row| row.len() != c) {
                return Err(PyValueError::new_err("ragged Kraus operator"));
            }
            let flat: Vec<Complex64> = k.into_iter().flatten().collect();
            mats.push(CMatrix::from_shape_vec((r, c), flat).expect("shape checked"));
        }
        qecmarkov::channels::Channel::from_kraus(&mats).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(dim: usize) -> PyResult<Self> {
        qecmarkov::channels::Channel::identity(dim).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        qecmarkov::channels::Channel::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn in_dim(&self) -> usize {
        self.0.in_dim()
    }

    #[getter]
    fn out_dim(&self) -> usize {
        self.0.out_dim()
    }

    /// Column-stacked superoperator.
    fn superoperator(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.matrix())
    }

    fn choi(&self) -> Vec<Vec<Complex64>> {
        rows(&self.0.choi())
    }

    fn apply(&self, rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
        let n = rho.len();
        if rho.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("state must be square"));
        }
        let m = CMatrix::from_shape_vec((n, n), rho.into_iter().flatten().collect()).expect("square");
        self.0.apply(&m).map(|o| rows(&o)).map_err(err)
    }

    /// `self` first, then `next`.
    fn then(&self, next: &PyChannel) -> PyResult<Self> {
        self.0.then(&next.0).map(Self).map_err(err)
    }

    fn power(&self, m: usize) -> PyResult<Self> {
        self.0.power(m).map(Self).map_err(err)
    }

    fn distance(&self, other: &PyChannel) -> f64 {
        self.0.distance(&other.0)
    }

    #[pyo3(signature = (tol = qecmarkov::channels::CPTP_TOLERANCE))]
    fn is_cptp(&self, tol: f64) -> bool {
        self.0.verify_cptp(tol).is_cptp()
    }

    fn pauli_transfer_matrix(&self) -> PyResult<Vec<Vec<f64>>> {
        let t = self.0.pauli_transfer_matrix().map_err(err)?;
        Ok(t.rows().into_iter().map(|r| r.to_vec()).collect())
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn is_pauli_channel(&self, tol: f64) -> PyResult<bool> {
        self.0.is_pauli_channel(tol).map_err(err)
    }

    /// `{pauli: probability}` for a Pauli channel.
    fn pauli_error_probabilities(&self) -> PyResult<Vec<(String, f64)>> {
        let probs = self.0.pauli_error_probabilities().map_err(err)?;
        Ok(probs.into_iter().map(|(p, w)| (p.to_string(), w)).collect())
    }
}

/// Polarization from the ancilla-level density-matrix simulation of the repetition code.
#[pyfunction]
fn circuit_oracle(p: f64, rounds: usize) -> PyResult<f64> {
    experiments::circuit_oracle(p, rounds).map_err(err)
}

#[pymodule(name = "qecmarkov")]
fn qecmarkov_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(circuit_oracle, m)?)?;
    Ok(())
}
