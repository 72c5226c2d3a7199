//! Stabilizer codes: syndromes, correction tables, logical decomposition and
//! the line-oriented code-definition file format.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pauli::{enumerate_paulis, parse_pauli, PauliOperator};

/// Largest `n` for which corrections and logical operators are synthesised by
/// exhaustive enumeration.
pub const MAX_SYNTHESIS_QUBITS: usize = 10;

/// Largest number of syndrome bits supported by the lookup table.
pub const MAX_SYNDROME_BITS: usize = 20;

/// Syndrome bit string. Bit `j` belongs to generator `j`; generator 0 is the
/// most significant bit of [`Syndrome::value`], so `value` is the integer
/// spelled by the string form ("01" == 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    len: usize,
    value: u64,
}

impl Syndrome {
    pub fn new(len: usize, value: u64) -> Result<Self> {
        if len > MAX_SYNDROME_BITS {
            return Err(Error::Capacity {
                what: "syndrome length",
                got: len,
                limit: MAX_SYNDROME_BITS,
            });
        }
        if value >> len != 0 {
            return Err(Error::Domain(format!(
                "syndrome value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self { len, value })
    }

    pub fn zero(len: usize) -> Self {
        Self { len, value: 0 }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
        Self::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// Bit for generator `j`.
    pub fn bit(&self, j: usize) -> bool {
        self.value >> (self.len - 1 - j) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|j| self.bit(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn weight(&self) -> usize {
        self.value.count_ones() as usize
    }

    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            value: self.value ^ other.value,
        }
    }

    pub fn hamming(&self, other: &Self) -> usize {
        (self.value ^ other.value).count_ones() as usize
    }

    /// Every syndrome of the given length in increasing value order.
    pub fn all(len: usize) -> impl Iterator<Item = Syndrome> {
        (0..1u64 << len).map(move |value| Syndrome { len, value })
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.bit(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    position: i,
                    message: format!("invalid syndrome bit {c:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Syndrome::from_bits(&bits)
    }
}

/// Incremental GF(2) row reduction over symplectic vectors, remembering which
/// inserted rows combine into each reduced row.
#[derive(Clone, Debug, Default)]
struct Gf2Span {
    // (vector, combination mask), sorted by decreasing leading bit
    rows: Vec<(u128, u64)>,
}

fn leading_bit(v: u128) -> u32 {
    127 - v.leading_zeros()
}

impl Gf2Span {
    fn reduce(&self, mut v: u128) -> (u128, u64) {
        let mut combo = 0u64;
        for &(row, rc) in &self.rows {
            if v >> leading_bit(row) & 1 == 1 {
                v ^= row;
                combo ^= rc;
            }
        }
        (v, combo)
    }

    /// Inserts `v` labelled by `label`; returns false when `v` is dependent.
    fn insert(&mut self, v: u128, label: u64) -> bool {
        let (residual, combo) = self.reduce(v);
        if residual == 0 {
            return false;
        }
        let lead = leading_bit(residual);
        let pos = self
            .rows
            .iter()
            .position(|&(r, _)| leading_bit(r) < lead)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, (residual, combo ^ label));
        true
    }
}

/// Solves `⟨g_i, d_j⟩ = δ_ij` for every generator by Gauss–Jordan
/// elimination on the symplectically twisted generator rows.
fn solve_destabilizers(n: usize, generators: &[PauliOperator]) -> Result<Vec<PauliOperator>> {
    let m = generators.len();
    // twisted row t_i = (z | x << 64) so that popcount(t_i & v) is the symplectic form
    let mut rows: Vec<(u128, u64)> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.z_bits() as u128 | (g.x_bits() as u128) << 64, 1u64 << i))
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut r = 0;
    for col in 0..128u32 {
        if r == m {
            break;
        }
        let Some(k) = (r..m).find(|&k| rows[k].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, k);
        let (pv, pc) = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0 >> col & 1 == 1 {
                row.0 ^= pv;
                row.1 ^= pc;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if r < m {
        return Err(Error::InvalidCode("generators are not independent".into()));
    }
    (0..m)
        .map(|j| {
            let v = rows
                .iter()
                .zip(&pivots)
                .filter(|((_, combo), _)| combo >> j & 1 == 1)
                .fold(0u128, |acc, (_, &col)| acc | 1u128 << col);
            PauliOperator::from_bits(n, v as u64, (v >> 64) as u64, 0)
        })
        .collect()
}

/// Result of splitting a Pauli into logical and correction components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub syndrome: Syndrome,
    /// Element of the normaliser; `logical · correction` reproduces the input.
    pub logical: PauliOperator,
    pub correction: PauliOperator,
}

/// Two corrections whose product carries a non-trivial logical component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncorrectablePair {
    pub s1: Syndrome,
    pub s2: Syndrome,
    /// Logical component of `R(s1)·R(s2)` on the data qubits.
    pub logical: PauliOperator,
    /// The same component expressed as a `k`-qubit Pauli.
    pub logical_pauli: PauliOperator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    destabilizers: Vec<PauliOperator>,
    corrections: Vec<PauliOperator>,
    declared_distance: Option<usize>,
    span: SpanCache,
}

// Gf2Span carries no identity of its own; codes compare by their public content.
#[derive(Clone, Debug, Default)]
struct SpanCache(Gf2Span);

impl PartialEq for SpanCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for SpanCache {}

/// Raw ingredients of a code before validation.
#[derive(Clone, Debug, Default)]
pub struct CodeSpec {
    pub name: Option<String>,
    pub n: usize,
    pub k: usize,
    pub declared_distance: Option<usize>,
    pub generators: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
    /// Synthesised when empty.
    pub logical_x: Vec<PauliOperator>,
    /// Synthesised (minimal weight, lexicographic tie-break) when empty.
    pub corrections: Vec<(Syndrome, PauliOperator)>,
}

fn check_len(n: usize, what: &str, p: &PauliOperator) -> Result<()> {
    if p.num_qubits() == n {
        Ok(())
    } else {
        Err(Error::InvalidCode(format!(
            "{what} {p} acts on {} qubits, expected {n}",
            p.num_qubits()
        )))
    }
}

impl StabilizerCode {
    /// Validates a specification and fills in destabilizers, and logical X
    /// operators and corrections when they are absent.
    pub fn from_spec(spec: CodeSpec) -> Result<Self> {
        let CodeSpec {
            name,
            n,
            k,
            declared_distance,
            generators,
            logical_z,
            logical_x,
            corrections,
        } = spec;
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::Capacity {
                what: "qubit count",
                got: n,
                limit: crate::pauli::MAX_QUBITS,
            });
        }
        if k > n {
            return Err(Error::InvalidCode(format!("k = {k} exceeds n = {n}")));
        }
        let m = n - k;
        if m > MAX_SYNDROME_BITS {
            return Err(Error::Capacity {
                what: "syndrome length",
                got: m,
                limit: MAX_SYNDROME_BITS,
            });
        }
        if generators.len() != m {
            return Err(Error::InvalidCode(format!(
                "expected {m} stabilizer generators, found {}",
                generators.len()
            )));
        }
        if logical_z.len() != k {
            return Err(Error::InvalidCode(format!(
                "expected {k} logical_z operators, found {}",
                logical_z.len()
            )));
        }
        for g in &generators {
            check_len(n, "stabilizer", g)?;
        }
        for l in logical_z.iter().chain(&logical_x) {
            check_len(n, "logical operator", l)?;
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.is_hermitian() {
                return Err(Error::InvalidCode(format!(
                    "generator {} has phase ±i and squares to -I",
                    i + 1
                )));
            }
            if g.is_identity_up_to_phase() {
                return Err(Error::InvalidCode(format!(
                    "generator {} is a multiple of the identity",
                    i + 1
                )));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if !generators[i].commutes(&generators[j])? {
                    return Err(Error::InvalidCode(format!(
                        "generators {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut span = Gf2Span::default();
        for (i, g) in generators.iter().enumerate() {
            if !span.insert(g.symplectic(), 1u64 << i) {
                return Err(Error::InvalidCode(format!(
                    "generator {} is dependent on earlier generators",
                    i + 1
                )));
            }
        }
        let destabilizers = solve_destabilizers(n, &generators)?;

        let mut code = Self {
            name: name.unwrap_or_else(|| "custom".into()),
            n,
            k,
            generators,
            logical_z,
            logical_x: Vec::new(),
            destabilizers,
            corrections: Vec::new(),
            declared_distance,
            span: SpanCache(span),
        };
        for (i, z) in code.logical_z.iter().enumerate() {
            if !z.is_hermitian() {
                return Err(Error::InvalidCode(format!("logical_z {} is not Hermitian", i + 1)));
            }
            if !code.in_normalizer(z)? {
                return Err(Error::InvalidCode(format!(
                    "logical_z {} anticommutes with a stabilizer generator",
                    i + 1
                )));
            }
        }
        {
            let mut with_z = code.span.0.clone();
            for (i, z) in code.logical_z.iter().enumerate() {
                if !with_z.insert(z.symplectic(), 0) {
                    return Err(Error::InvalidCode(format!(
                        "logical_z {} is dependent on the stabilizers or earlier logicals",
                        i + 1
                    )));
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if !code.logical_z[i].commutes(&code.logical_z[j])? {
                    return Err(Error::InvalidCode(format!(
                        "logical_z {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        code.logical_x = if logical_x.is_empty() {
            code.synthesize_logical_x()?
        } else {
            if logical_x.len() != k {
                return Err(Error::InvalidCode(format!(
                    "expected {k} logical_x operators, found {}",
                    logical_x.len()
                )));
            }
            logical_x
        };
        code.check_logical_pairs()?;
        code.corrections = if corrections.is_empty() {
            code.synthesize_corrections()?
        } else {
            code.check_corrections(corrections)?
        };
        Ok(code)
    }

    fn check_logical_pairs(&self) -> Result<()> {
        for (i, x) in self.logical_x.iter().enumerate() {
            if !x.is_hermitian() {
                return Err(Error::InvalidCode(format!("logical_x {} is not Hermitian", i + 1)));
            }
            if !self.in_normalizer(x)? {
                return Err(Error::InvalidCode(format!(
                    "logical_x {} anticommutes with a stabilizer generator",
                    i + 1
                )));
            }
            for (j, z) in self.logical_z.iter().enumerate() {
                let anti = !x.commutes(z)?;
                if anti != (i == j) {
                    return Err(Error::InvalidCode(format!(
                        "logical_x {} and logical_z {} have the wrong commutation",
                        i + 1,
                        j + 1
                    )));
                }
            }
            for (j, other) in self.logical_x.iter().enumerate().skip(i + 1) {
                if !x.commutes(other)? {
                    return Err(Error::InvalidCode(format!(
                        "logical_x {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_corrections(&self, given: Vec<(Syndrome, PauliOperator)>) -> Result<Vec<PauliOperator>> {
        let m = self.num_syndrome_bits();
        let size = 1usize << m;
        let mut table: Vec<Option<PauliOperator>> = vec![None; size];
        for (s, r) in given {
            if s.len() != m {
                return Err(Error::InvalidCode(format!(
                    "correction syndrome {s} has {} bits, expected {m}",
                    s.len()
                )));
            }
            check_len(self.n, "correction", &r)?;
            let actual = self.syndrome_of(&r)?;
            if actual != s {
                return Err(Error::InvalidCode(format!(
                    "correction {r} has syndrome {actual}, listed under {s}"
                )));
            }
            if table[s.index()].replace(r).is_some() {
                return Err(Error::InvalidCode(format!("duplicate correction for syndrome {s}")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::InvalidCode(format!(
                        "correction table is incomplete: syndrome {} missing",
                        Syndrome { len: m, value: i as u64 }
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if !table[0].is_identity() {
            return Err(Error::InvalidCode(format!(
                "correction for the trivial syndrome must be the identity, found {}",
                table[0]
            )));
        }
        Ok(table)
    }

    fn synthesize_corrections(&self) -> Result<Vec<PauliOperator>> {
        if self.n > MAX_SYNTHESIS_QUBITS {
            return Err(Error::Capacity {
                what: "qubit count for correction synthesis",
                got: self.n,
                limit: MAX_SYNTHESIS_QUBITS,
            });
        }
        let size = 1usize << self.num_syndrome_bits();
        let mut table: Vec<Option<PauliOperator>> = vec![None; size];
        // lexicographic enumeration keeps the first minimal-weight hit per syndrome
        for p in enumerate_paulis(self.n) {
            let s = self.syndrome_of(&p)?;
            let slot = &mut table[s.index()];
            if slot.as_ref().is_none_or(|cur| p.weight() < cur.weight()) {
                *slot = Some(p);
            }
        }
        Ok(table.into_iter().map(|r| r.expect("every syndrome is reachable")).collect())
    }

    fn synthesize_logical_x(&self) -> Result<Vec<PauliOperator>> {
        if self.n > MAX_SYNTHESIS_QUBITS {
            return Err(Error::Capacity {
                what: "qubit count for logical_x synthesis",
                got: self.n,
                limit: MAX_SYNTHESIS_QUBITS,
            });
        }
        let mut candidates: Vec<PauliOperator> = enumerate_paulis(self.n).collect();
        candidates.sort_by_key(|p| p.weight());
        let mut chosen: Vec<PauliOperator> = Vec::with_capacity(self.k);
        for i in 0..self.k {
            let pick = candidates.iter().find(|p| {
                self.in_normalizer(p).unwrap_or(false)
                    && self
                        .logical_z
                        .iter()
                        .enumerate()
                        .all(|(j, z)| p.commutes(z).unwrap_or(false) != (i == j))
                    && chosen.iter().all(|x| p.commutes(x).unwrap_or(false))
            });
            match pick {
                Some(p) => chosen.push(p.clone()),
                None => {
                    return Err(Error::InvalidCode(format!(
                        "no logical_x {} consistent with the logical_z operators",
                        i + 1
                    )))
                }
            }
        }
        Ok(chosen)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_syndrome_bits(&self) -> usize {
        self.n - self.k
    }

    pub fn num_syndromes(&self) -> usize {
        1 << self.num_syndrome_bits()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.destabilizers
    }

    pub fn declared_distance(&self) -> Option<usize> {
        self.declared_distance
    }

    /// Correction table indexed by [`Syndrome::index`].
    pub fn corrections(&self) -> &[PauliOperator] {
        &self.corrections
    }

    pub fn correction(&self, s: &Syndrome) -> &PauliOperator {
        &self.corrections[s.index()]
    }

    pub fn syndromes(&self) -> impl Iterator<Item = Syndrome> {
        Syndrome::all(self.num_syndrome_bits())
    }

    fn check_qubits(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() == self.n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.n,
                got: p.num_qubits(),
            })
        }
    }

    /// Bit `j` is set when `p` anticommutes with generator `j`.
    pub fn syndrome_of(&self, p: &PauliOperator) -> Result<Syndrome> {
        self.check_qubits(p)?;
        let mut bits = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            bits.push(p.symplectic_product(g)?);
        }
        Syndrome::from_bits(&bits)
    }

    pub fn in_normalizer(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.syndrome_of(p)?.is_zero())
    }

    /// True when `p` equals a stabilizer up to phase.
    pub fn in_stabilizer_group_up_to_phase(&self, p: &PauliOperator) -> Result<bool> {
        self.check_qubits(p)?;
        Ok(self.span.0.reduce(p.symplectic()).0 == 0)
    }

    /// Normaliser element that is not a stabilizer.
    pub fn is_nontrivial_logical(&self, p: &PauliOperator) -> Result<bool> {
        Ok(self.in_normalizer(p)? && !self.in_stabilizer_group_up_to_phase(p)?)
    }

    /// Product of the generators selected by bit `i` of `mask`, in index order.
    pub fn stabilizer_element(&self, mask: u64) -> PauliOperator {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(PauliOperator::identity(self.n), |acc, (_, g)| {
                acc.mul(g).expect("generators share the code size")
            })
    }

    /// Product of destabilizers selected by the set bits of `s`.
    pub fn destabilizer_for(&self, s: &Syndrome) -> PauliOperator {
        (0..s.len())
            .filter(|&j| s.bit(j))
            .fold(PauliOperator::identity(self.n), |acc, j| {
                acc.mul(&self.destabilizers[j]).expect("same size")
            })
    }

    /// Splits `p = logical · R(syndrome_of(p))` with the phase carried by
    /// the logical component.
    pub fn decompose(&self, p: &PauliOperator) -> Result<Decomposition> {
        let syndrome = self.syndrome_of(p)?;
        let correction = self.correction(&syndrome).clone();
        let logical = p.mul(&correction.adjoint())?;
        Ok(Decomposition {
            syndrome,
            logical,
            correction,
        })
    }

    /// Maps a normaliser element to the `k`-qubit Pauli it implements on the
    /// encoded basis (so that `E† l E` equals its dense form).
    pub fn logical_pauli_of(&self, l: &PauliOperator) -> Result<PauliOperator> {
        if !self.in_normalizer(l)? {
            return Err(Error::Domain(format!(
                "{l} anticommutes with a stabilizer generator"
            )));
        }
        let mut rep = PauliOperator::identity(self.n);
        let mut target = PauliOperator::identity(self.k);
        for i in 0..self.k {
            let x_part = !l.commutes(&self.logical_z[i])?;
            let z_part = !l.commutes(&self.logical_x[i])?;
            if x_part {
                rep = rep.mul(&self.logical_x[i])?;
                target = target.mul(&PauliOperator::single(self.k, i, 'X')?)?;
            }
            if z_part {
                rep = rep.mul(&self.logical_z[i])?;
                target = target.mul(&PauliOperator::single(self.k, i, 'Z')?)?;
            }
        }
        // l = i^t · S · rep for a stabilizer S, and S acts as +1 on the codespace
        let remainder = l.mul(&rep.adjoint())?;
        let (residual, mask) = self.span.0.reduce(remainder.symplectic());
        if residual != 0 {
            return Err(Error::Domain(format!(
                "{l} is not generated by the stabilizers and logical operators"
            )));
        }
        let stab = self.stabilizer_element(mask);
        let t = (remainder.phase() + 4 - stab.phase()) % 4;
        Ok(target.with_phase((target.phase() + t) % 4))
    }

    /// Lexicographically first pair `(s1, s2)` with `s2 < s1` whose corrections
    /// multiply to an operator with a non-trivial logical component.
    pub fn find_uncorrectable_pair(&self) -> Result<UncorrectablePair> {
        let syndromes: Vec<Syndrome> = self.syndromes().collect();
        for s1 in &syndromes {
            for s2 in syndromes.iter().take_while(|s| s.value() < s1.value()) {
                let product = self.correction(s1).mul(self.correction(s2))?;
                let dec = self.decompose(&product)?;
                if !self.in_stabilizer_group_up_to_phase(&dec.logical)? {
                    let logical_pauli = self.logical_pauli_of(&dec.logical)?;
                    return Ok(UncorrectablePair {
                        s1: *s1,
                        s2: *s2,
                        logical: dec.logical,
                        logical_pauli,
                    });
                }
            }
        }
        Err(Error::SearchExhausted(
            "every product of two corrections is correctable; distance below 3 or corrections inconsistent"
                .into(),
        ))
    }

    /// Smallest weight of a non-trivial logical operator, by exhaustive search.
    pub fn computed_distance(&self) -> Result<usize> {
        if self.n > MAX_SYNTHESIS_QUBITS {
            return Err(Error::Capacity {
                what: "qubit count for distance search",
                got: self.n,
                limit: MAX_SYNTHESIS_QUBITS,
            });
        }
        let mut best = usize::MAX;
        for p in enumerate_paulis(self.n) {
            if p.weight() < best && self.is_nontrivial_logical(&p)? {
                best = p.weight();
            }
        }
        Ok(best)
    }

    /// Canonical code-definition text; parses back to an equal code.
    pub fn to_code_file(&self) -> String {
        let mut out = format!("n {}\nk {}\n", self.n, self.k);
        if let Some(d) = self.declared_distance {
            out += &format!("d {d}\n");
        }
        for g in &self.generators {
            out += &format!("stabilizer {g}\n");
        }
        for z in &self.logical_z {
            out += &format!("logical_z {z}\n");
        }
        for x in &self.logical_x {
            out += &format!("logical_x {x}\n");
        }
        for s in self.syndromes() {
            out += &format!("correction {s} {}\n", self.correction(&s));
        }
        out
    }

    /// SHA-256 of the canonical code-definition text, hex encoded.
    pub fn fingerprint(&self) -> String {
        Sha256::digest(self.to_code_file().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Three-qubit bit-flip repetition code with the standard lookup decoder.
pub fn builtin_rep3() -> StabilizerCode {
    let p = |s: &str| parse_pauli(s).expect("valid literal");
    let s = |t: &str| t.parse::<Syndrome>().expect("valid literal");
    StabilizerCode::from_spec(CodeSpec {
        name: Some("rep3".into()),
        n: 3,
        k: 1,
        declared_distance: Some(3),
        generators: vec![p("ZZI"), p("IZZ")],
        logical_z: vec![p("ZZZ")],
        logical_x: vec![p("XXX")],
        corrections: vec![
            (s("00"), p("III")),
            (s("10"), p("XII")),
            (s("01"), p("IIX")),
            (s("11"), p("IXI")),
        ],
    })
    .expect("rep3 is a valid code")
}

/// The [[5,1,3]] perfect code; each non-trivial syndrome is corrected by the
/// unique single-qubit Pauli carrying it.
pub fn builtin_five_qubit() -> StabilizerCode {
    let p = |s: &str| parse_pauli(s).expect("valid literal");
    StabilizerCode::from_spec(CodeSpec {
        name: Some("five-qubit".into()),
        n: 5,
        k: 1,
        declared_distance: Some(3),
        generators: vec![p("ZZXIX"), p("XZZXI"), p("IXZZX"), p("XIXZZ")],
        logical_z: vec![p("-XIZIX")],
        // first minimal-weight choice in lexicographic order
        logical_x: vec![p("IIXYX")],
        corrections: Vec::new(),
    })
    .expect("five-qubit code is valid")
}

/// Parses the line-oriented code-definition format.
pub fn parse_code_file(text: &str) -> Result<StabilizerCode> {
    let mut spec = CodeSpec::default();
    let (mut n, mut k) = (None, None);
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            position: line_no,
            message: format!("line {line_no}: {message}"),
        };
        let mut fields = line.split_whitespace();
        let key = fields.next().expect("non-empty line");
        let args: Vec<&str> = fields.collect();
        let one = |args: &[&str]| -> Result<String> {
            match args {
                [a] => Ok(a.to_string()),
                _ => Err(err(format!("{key} takes exactly one argument"))),
            }
        };
        let int = |args: &[&str]| -> Result<usize> {
            one(args)?
                .parse::<usize>()
                .map_err(|e| err(format!("{key}: {e}")))
        };
        let pauli = |s: &str| parse_pauli(s).map_err(|e| err(format!("{key}: {e}")));
        match key {
            "n" => n = Some(int(&args)?),
            "k" => k = Some(int(&args)?),
            "d" => spec.declared_distance = Some(int(&args)?),
            "stabilizer" => spec.generators.push(pauli(&one(&args)?)?),
            "logical_z" => spec.logical_z.push(pauli(&one(&args)?)?),
            "logical_x" => spec.logical_x.push(pauli(&one(&args)?)?),
            "correction" => {
                let [s, r] = args.as_slice() else {
                    return Err(err("correction takes a syndrome and a Pauli".into()));
                };
                let s = s
                    .parse::<Syndrome>()
                    .map_err(|e| err(format!("correction: {e}")))?;
                spec.corrections.push((s, pauli(r)?));
            }
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    spec.n = n.ok_or_else(|| Error::InvalidCode("missing `n` line".into()))?;
    spec.k = k.ok_or_else(|| Error::InvalidCode("missing `k` line".into()))?;
    StabilizerCode::from_spec(spec)
}
