//! Stabilizer-formalism substrate: Pauli strings, Clifford conjugation,
//! tableaus with destabilizers, GF(2) rank and Pauli frames.

pub mod bits;
mod frame;
mod gates;
mod pauli;
mod symplectic;
mod tableau;

pub use bits::BitVec;
pub use frame::PauliFrame;
pub use gates::Clifford;
pub use pauli::PauliString;
pub use symplectic::{gf2_rank, pauli_in_group, restrict_columns, BinarySymplecticMatrix, StabilizerGroup};
pub use tableau::{AffineSign, Measurement, Sign, StabilizerTableau};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("duplicate qubit {0} in subset")]
    DuplicateQubit(usize),
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid Pauli string {0:?}")]
    BadPauli(String),
    #[error("generators do not define a pure stabilizer state: {0}")]
    NotAStabilizerState(String),
}
