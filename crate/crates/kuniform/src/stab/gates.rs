use std::fmt;

use super::bits::BitVec;
use super::pauli::PauliString;
use super::StabError;

/// A Clifford gate from the supported set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clifford {
    H(usize),
    S(usize),
    /// Inverse phase gate.
    Sdg(usize),
    X(usize),
    Z(usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Clifford {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Clifford::H(q) | Clifford::S(q) | Clifford::Sdg(q) | Clifford::X(q) | Clifford::Z(q) => (q, None),
            Clifford::Cnot(a, b) | Clifford::Cz(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    pub fn check(&self, n: usize) -> Result<(), StabError> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(StabError::QubitOutOfRange { index: q, n });
            }
        }
        if b == Some(a) {
            return Err(StabError::SameQubit(a));
        }
        Ok(())
    }

    /// Conjugates the `(x, z)` row in place and reports whether the sign flips.
    #[inline]
    pub(crate) fn conjugate_bits(&self, x: &mut BitVec, z: &mut BitVec) -> bool {
        match *self {
            Clifford::H(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                x.set(a, za);
                z.set(a, xa);
                xa && za
            }
            Clifford::S(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                z.set(a, za ^ xa);
                xa && za
            }
            Clifford::Sdg(a) => {
                let (xa, za) = (x.get(a), z.get(a));
                z.set(a, za ^ xa);
                xa && !za
            }
            Clifford::X(a) => z.get(a),
            Clifford::Z(a) => x.get(a),
            Clifford::Cnot(c, t) => {
                let (xc, zc, xt, zt) = (x.get(c), z.get(c), x.get(t), z.get(t));
                x.set(t, xt ^ xc);
                z.set(c, zc ^ zt);
                xc && zt && !(xt ^ zc)
            }
            Clifford::Cz(a, b) => {
                let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                z.set(a, za ^ xb);
                z.set(b, zb ^ xa);
                xa && xb && (za ^ zb)
            }
        }
    }

    /// Conjugates `p ↦ G p G†` including the sign.
    pub fn conjugate(&self, p: &mut PauliString) {
        if self.conjugate_bits(&mut p.x, &mut p.z) {
            p.sign = !p.sign;
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Clifford {
        match *self {
            Clifford::S(q) => Clifford::Sdg(q),
            Clifford::Sdg(q) => Clifford::S(q),
            g => g,
        }
    }

    /// Returns the same gate with qubits remapped by `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Clifford {
        match *self {
            Clifford::H(q) => Clifford::H(f(q)),
            Clifford::S(q) => Clifford::S(f(q)),
            Clifford::Sdg(q) => Clifford::Sdg(f(q)),
            Clifford::X(q) => Clifford::X(f(q)),
            Clifford::Z(q) => Clifford::Z(f(q)),
            Clifford::Cnot(a, b) => Clifford::Cnot(f(a), f(b)),
            Clifford::Cz(a, b) => Clifford::Cz(f(a), f(b)),
        }
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Clifford::H(q) => write!(f, "H {q}"),
            Clifford::S(q) => write!(f, "S {q}"),
            Clifford::Sdg(q) => write!(f, "SDG {q}"),
            Clifford::X(q) => write!(f, "X {q}"),
            Clifford::Z(q) => write!(f, "Z {q}"),
            Clifford::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
            Clifford::Cz(a, b) => write!(f, "CZ {a} {b}"),
        }
    }
}
