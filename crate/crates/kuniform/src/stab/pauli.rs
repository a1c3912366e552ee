//! Hermitian Pauli operators in binary symplectic form.

use std::fmt;
use std::str::FromStr;

use super::bits::BitVec;
use super::StabError;

/// An `n`-qubit Pauli operator `(-1)^sign · P_0 ⊗ … ⊗ P_{n-1}`.
///
/// Each factor is encoded by its `(x, z)` bit pair: `I = (0,0)`,
/// `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: BitVec,
    pub z: BitVec,
    /// `true` means an overall factor of −1.
    pub sign: bool,
}

/// Exponent `e` such that `P·Q = i^e · R` with `R` Hermitian, summed over
/// word-packed factors.
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut pos = 0u32;
    let mut neg = 0u32;
    for i in 0..x1.len() {
        let (a, b, c, d) = (x1[i], z1[i], x2[i], z2[i]);
        let y1 = a & b;
        let xo = a & !b;
        let zo = !a & b;
        pos += ((y1 & d & !c) | (xo & d & c) | (zo & c & !d)).count_ones();
        neg += ((y1 & c & !d) | (xo & d & !c) | (zo & c & d)).count_ones();
    }
    (pos + 3 * neg) % 4
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            sign: false,
        }
    }

    /// Single-qubit Pauli `p ∈ {'I','X','Y','Z'}` on `qubit`.
    pub fn single(n: usize, qubit: usize, p: char) -> Self {
        let mut out = PauliString::identity(n);
        out.set(qubit, p);
        out
    }

    /// Pauli with `p` on every listed qubit.
    pub fn on(n: usize, qubits: &[usize], p: char) -> Self {
        let mut out = PauliString::identity(n);
        for &q in qubits {
            out.set(q, p);
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn get(&self, qubit: usize) -> char {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn set(&mut self, qubit: usize, p: char) {
        let (x, z) = match p {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            _ => panic!("not a Pauli letter: {p}"),
        };
        self.x.set(qubit, x);
        self.z.set(qubit, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits on which the operator acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n(), other.n());
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Returns `(i^e, R)` with `self · other = i^e · R`, where `R` carries
    /// the combined sign and `e ∈ {0, 1}` after folding even powers into `R`.
    pub fn mul_with_phase(&self, other: &PauliString) -> (bool, PauliString) {
        assert_eq!(self.n(), other.n(), "Pauli length mismatch");
        let e = product_phase(self.x.words(), self.z.words(), other.x.words(), other.z.words());
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        let sign = self.sign ^ other.sign ^ (e >= 2);
        (e % 2 == 1, PauliString { x, z, sign })
    }

    /// Product of two commuting Paulis.
    ///
    /// # Panics
    /// If the operands anticommute (the product is not Hermitian).
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let (imag, p) = self.mul_with_phase(other);
        assert!(!imag, "product of anticommuting Paulis is not Hermitian");
        p
    }

    /// Multiplies in place ignoring the overall phase.
    pub fn mul_assign_unsigned(&mut self, other: &PauliString) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Embeds into a larger register, placing qubit `i` at `offset + i`.
    pub fn embed(&self, n: usize, offset: usize) -> PauliString {
        let mut out = PauliString::identity(n);
        for q in 0..self.n() {
            out.x.set(offset + q, self.x.get(q));
            out.z.set(offset + q, self.z.get(q));
        }
        out.sign = self.sign;
        out
    }

    /// Restricts to the listed qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.x.set(i, self.x.get(q));
            out.z.set(i, self.z.get(q));
        }
        out.sign = self.sign;
        out
    }

    /// The operator with the sign dropped.
    pub fn unsigned(&self) -> PauliString {
        PauliString {
            sign: false,
            ..self.clone()
        }
    }

    /// Concatenated `(x | z)` bits.
    pub fn symplectic(&self) -> BitVec {
        let n = self.n();
        let mut v = BitVec::zeros(2 * n);
        for q in self.x.iter_ones() {
            v.set(q, true);
        }
        for q in self.z.iter_ones() {
            v.set(n + q, true);
        }
        v
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign { "-" } else { "+" })?;
        for q in 0..self.n() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = StabError;

    /// Parses strings like `"XZZXI"`, `"-YY"` or `"+IZ"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = PauliString::identity(body.chars().count());
        for (q, c) in body.chars().enumerate() {
            if !matches!(c, 'I' | 'X' | 'Y' | 'Z') {
                return Err(StabError::BadPauli(s.to_string()));
            }
            p.set(q, c);
        }
        p.sign = sign;
        Ok(p)
    }
}
