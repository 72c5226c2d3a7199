//! Small dense helpers shared by the operator engine.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMatrix = Array2<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Shortest text that parses back to `x`; exponent form outside `[1e-4, 1e15)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn identity(dim: usize) -> CMatrix {
    Array2::eye(dim)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|v| v.conj())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &av) in a.indexed_iter() {
        if av == ZERO {
            continue;
        }
        for ((k, l), &bv) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = av * bv;
        }
    }
    out
}

/// Maximum absolute entrywise difference; `inf` on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.dim() != b.dim() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Column-stacking vectorisation: entry `(i, j)` lands at `i + rows * j`.
pub fn vectorize(m: &CMatrix) -> Array1<Complex64> {
    let (rows, cols) = m.dim();
    let mut v = Array1::zeros(rows * cols);
    for ((i, j), &val) in m.indexed_iter() {
        v[i + rows * j] = val;
    }
    v
}

pub fn unvectorize(v: &Array1<Complex64>, rows: usize, cols: usize) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |(i, j)| v[i + rows * j])
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diag().sum()
}

fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex64> {
    let (r, c) = m.dim();
    DMatrix::from_fn(r, c, |i, j| m[[i, j]])
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = to_nalgebra(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Certifies `λ_min(m) > -tol` by a Cholesky factorisation of `m + tol·I`,
/// carried out on the real symmetric embedding `[[A, -B], [B, A]]`.
pub fn is_psd_within(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    let h = |i: usize, j: usize| (m[[i, j]] + m[[j, i]].conj()) * 0.5;
    let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = h(i, j);
            real[(i, j)] = v.re;
            real[(i + n, j + n)] = v.re;
            real[(i, j + n)] = -v.im;
            real[(i + n, j)] = v.im;
        }
    }
    for i in 0..2 * n {
        real[(i, i)] += tol;
    }
    real.cholesky().is_some()
}

/// Eigenvalues of a general real matrix (unordered).
pub fn real_eigenvalues(m: &Array2<f64>) -> Vec<Complex64> {
    let (r, c) = m.dim();
    let dm = DMatrix::from_fn(r, c, |i, j| m[[i, j]]);
    dm.complex_eigenvalues().iter().copied().collect()
}
