//! n-qubit Pauli group arithmetic in symplectic form.
//!
//! An operator is stored as `i^phase * P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}` where each
//! `P_q ∈ {I, X, Y, Z}` is encoded by the bit pair `(x_q, z_q)`, with `(1, 1)`
//! meaning `Y`. Qubit 0 is the leftmost character of the string form and the
//! most significant factor of the dense Kronecker expansion.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register supported by the packed representation.
pub const MAX_QUBITS: usize = 64;

/// Largest register that [`PauliOperator::dense`] will expand.
pub const MAX_DENSE_QUBITS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

/// Exponent of `i` produced by multiplying single-qubit Paulis
/// `σ(x1, z1) · σ(x2, z2) = i^g σ(x1⊕x2, z1⊕z2)`.
fn product_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2i, z2i) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2i - x2i,
        (true, false) => z2i * (2 * x2i - 1),
        (false, true) => x2i * (1 - 2 * z2i),
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Builds an operator from packed bit words; bit `q` of each word is qubit `q`.
    pub fn from_bits(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "qubit count",
                got: n,
                limit: MAX_QUBITS,
            });
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::Domain(format!("bits set beyond qubit count {n}")));
        }
        Ok(Self {
            n,
            x,
            z,
            phase: phase % 4,
        })
    }

    /// Single-qubit operator `letter` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self> {
        if q >= n {
            return Err(Error::Dimension { expected: n, got: q });
        }
        let (xb, zb) = letter_bits(letter).ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("invalid Pauli letter {letter:?}"),
        })?;
        Self::from_bits(n, (xb as u64) << q, (zb as u64) << q, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Power of `i` multiplying the tensor product of letters.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x >> q & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z >> q & 1 == 1
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..self.clone()
        }
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_up_to_phase() && self.phase == 0
    }

    /// Equality ignoring the phase.
    pub fn same_letters(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Letters are self-inverse, so the adjoint only conjugates the phase.
    pub fn adjoint(&self) -> Self {
        self.with_phase((4 - self.phase) % 4)
    }

    /// Symplectic vector packed as `x | z << 64`.
    pub fn symplectic(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            })
        }
    }

    /// Operator product `self · other` with exact phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let mut phase = self.phase as i32 + other.phase as i32;
        let active = (self.x | self.z) & (other.x | other.z);
        for q in 0..self.n {
            if active >> q & 1 == 1 {
                phase += product_phase(
                    self.x_bit(q),
                    self.z_bit(q),
                    other.x_bit(q),
                    other.z_bit(q),
                );
            }
        }
        Ok(Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: phase.rem_euclid(4) as u8,
        })
    }

    /// Parity of the symplectic inner product: `true` when the symplectic
    /// form is odd, i.e. the operators anticommute.
    pub fn symplectic_product(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 1)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn dense(&self) -> Result<Array2<Complex64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::Capacity {
                what: "dense expansion qubit count",
                got: self.n,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n;
        // Kronecker index bit for qubit q sits at position n-1-q.
        let to_index = |word: u64| -> usize {
            (0..self.n)
                .filter(|&q| word >> q & 1 == 1)
                .map(|q| 1usize << (self.n - 1 - q))
                .sum()
        };
        let flip = to_index(self.x);
        let zmask = to_index(self.z);
        let y_count = (self.x & self.z).count_ones();
        let base = i_power(self.phase as u32 + y_count);
        let mut m = Array2::zeros((dim, dim));
        for col in 0..dim {
            let sign = if (col & zmask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            m[[col ^ flip, col]] = base * sign;
        }
        Ok(m)
    }
}

pub(crate) fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn letter_bits(c: char) -> Option<(bool, bool)> {
    match c {
        'I' => Some((false, false)),
        'X' => Some((true, false)),
        'Y' => Some((true, true)),
        'Z' => Some((false, true)),
        _ => None,
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pauli(s)
    }
}

/// Parses `[+|-|i|+i|-i]{I,X,Y,Z}+`, e.g. `"-XIZIX"`.
pub fn parse_pauli(text: &str) -> Result<PauliOperator> {
    let chars: Vec<char> = text.chars().collect();
    let (phase, start) = match chars.as_slice() {
        ['-', 'i', ..] => (3, 2),
        ['+', 'i', ..] => (1, 2),
        ['-', ..] => (2, 1),
        ['+', ..] => (0, 1),
        ['i', ..] => (1, 1),
        _ => (0, 0),
    };
    let body = &chars[start..];
    if body.is_empty() {
        return Err(Error::Parse {
            position: chars.len(),
            message: "expected at least one Pauli letter".into(),
        });
    }
    if body.len() > MAX_QUBITS {
        return Err(Error::Capacity {
            what: "qubit count",
            got: body.len(),
            limit: MAX_QUBITS,
        });
    }
    let (mut x, mut z) = (0u64, 0u64);
    for (q, &c) in body.iter().enumerate() {
        let (xb, zb) = letter_bits(c).ok_or_else(|| Error::Parse {
            position: start + q,
            message: format!("invalid Pauli letter {c:?}"),
        })?;
        x |= (xb as u64) << q;
        z |= (zb as u64) << q;
    }
    PauliOperator::from_bits(body.len(), x, z, phase)
}

/// All `4^n` letter strings in lexicographic order (`I < X < Y < Z`, qubit 0
/// most significant), phase zero.
pub fn enumerate_paulis(n: usize) -> impl Iterator<Item = PauliOperator> {
    let total = 1u64 << (2 * n);
    (0..total).map(move |t| {
        let (mut x, mut z) = (0u64, 0u64);
        for q in 0..n {
            let digit = (t >> (2 * (n - 1 - q))) & 3;
            let (xb, zb) = match digit {
                0 => (0, 0),
                1 => (1, 0),
                2 => (1, 1),
                _ => (0, 1),
            };
            x |= xb << q;
            z |= zb << q;
        }
        PauliOperator { n, x, z, phase: 0 }
    })
}

/// Index of a phase-free Pauli in the order produced by [`enumerate_paulis`].
pub fn lexicographic_index(p: &PauliOperator) -> usize {
    (0..p.n).fold(0usize, |acc, q| {
        let digit = match (p.x_bit(q), p.z_bit(q)) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        };
        acc * 4 + digit
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let prod = p("XI").mul(&p("ZI")).unwrap();
        assert_eq!(prod, p("-iYI"));
    }

    #[test]
    fn single_qubit_commutation() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn weights() {
        assert_eq!(PauliOperator::identity(5).weight(), 0);
        assert_eq!(p("XIZIX").weight(), 3);
        assert_eq!(p("ZZI").weight(), 2);
    }

    #[test]
    fn parse_prefixes() {
        let a = p("ZZXIX");
        assert_eq!((a.weight(), a.phase()), (4, 0));
        assert_eq!(p("-XIZIX").phase(), 2);
        assert_eq!(p("iX").phase(), 1);
        assert_eq!(p("-iX").phase(), 3);
        assert_eq!(p("+Y").phase(), 0);
        assert_eq!(
            parse_pauli("QX"),
            Err(Error::Parse {
                position: 0,
                message: "invalid Pauli letter 'Q'".into()
            })
        );
        assert!(matches!(parse_pauli("-XQ"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_pauli("-"), Err(Error::Parse { .. })));
    }

    #[test]
    fn size_mismatch_is_dimension_error() {
        assert!(matches!(p("X").mul(&p("XX")), Err(Error::Dimension { .. })));
        assert!(matches!(p("X").commutes(&p("XX")), Err(Error::Dimension { .. })));
    }

    #[test]
    fn dense_small_cases() {
        let one = Complex64::new(1.0, 0.0);
        let i = p("I").dense().unwrap();
        assert_eq!(i, Array2::from_diag(&ndarray::arr1(&[one, one])));
        let z = p("Z").dense().unwrap();
        assert_eq!(z, Array2::from_diag(&ndarray::arr1(&[one, -one])));
        assert!(matches!(
            PauliOperator::identity(7).dense(),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn lexicographic_enumeration_matches_index() {
        for (idx, q) in enumerate_paulis(3).enumerate() {
            assert_eq!(lexicographic_index(&q), idx);
        }
        let first: Vec<String> = enumerate_paulis(2).take(5).map(|q| q.to_string()).collect();
        assert_eq!(first, ["II", "IX", "IY", "IZ", "XI"]);
    }
}
