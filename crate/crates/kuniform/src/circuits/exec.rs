use rand::Rng;

use super::{Circuit, CircuitError, Gate};
use crate::stab::{AffineSign, BitVec, Clifford, Measurement, PauliFrame, PauliString, Sign, StabilizerTableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasBasis {
    X,
    Z,
}

/// A circuit operation with labels resolved to record indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Gate(Clifford),
    Measure {
        qubit: usize,
        basis: MeasBasis,
        index: usize,
    },
    /// Applies `pauli` (`'X'` or `'Z'`) on `qubit` if the parity of the
    /// listed record entries is 1.
    Cond {
        qubit: usize,
        pauli: char,
        parity: Vec<usize>,
    },
}

impl Op {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match self {
            Op::Gate(c) => c.qubits(),
            Op::Measure { qubit, .. } | Op::Cond { qubit, .. } => (*qubit, None),
        }
    }
}

/// A circuit lowered to resolved operations, still grouped by layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub n_qubits: usize,
    pub layers: Vec<Vec<Op>>,
    pub n_measurements: usize,
}

impl Program {
    pub fn compile(c: &Circuit) -> Program {
        let layers = c
            .layers()
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| match g {
                        Gate::Clifford(cl) => Op::Gate(*cl),
                        Gate::MeasureZ { qubit, label } | Gate::MeasureX { qubit, label } => Op::Measure {
                            qubit: *qubit,
                            basis: if matches!(g, Gate::MeasureZ { .. }) {
                                MeasBasis::Z
                            } else {
                                MeasBasis::X
                            },
                            index: c.label_index(label).expect("validated label"),
                        },
                        Gate::CondX { qubit, condition } | Gate::CondZ { qubit, condition } => Op::Cond {
                            qubit: *qubit,
                            pauli: if matches!(g, Gate::CondX { .. }) { 'X' } else { 'Z' },
                            parity: condition
                                .iter()
                                .map(|l| c.label_index(l).expect("validated label"))
                                .collect(),
                        },
                    })
                    .collect()
            })
            .collect();
        Program {
            n_qubits: c.n_qubits(),
            layers,
            n_measurements: c.n_measurements(),
        }
    }

    pub fn ops(&self) -> impl Iterator<Item = &Op> {
        self.layers.iter().flatten()
    }
}

/// Runs a program on `t`. `random(index)` supplies the outcome of each
/// non-deterministic measurement.
pub fn run_tableau<S: Sign>(
    p: &Program,
    t: &mut StabilizerTableau<S>,
    mut random: impl FnMut(usize) -> S,
) -> Result<Vec<Measurement<S>>, CircuitError> {
    if t.n() != p.n_qubits {
        return Err(CircuitError::Stab(crate::stab::StabError::SizeMismatch {
            expected: p.n_qubits,
            got: t.n(),
        }));
    }
    let n = p.n_qubits;
    let mut record: Vec<Measurement<S>> = Vec::with_capacity(p.n_measurements);
    for op in p.ops() {
        match op {
            Op::Gate(g) => t.apply(g)?,
            Op::Measure { qubit, basis, index } => {
                let m = match basis {
                    MeasBasis::Z => t.measure_z(*qubit, || random(*index))?,
                    MeasBasis::X => t.measure_x(*qubit, || random(*index))?,
                };
                debug_assert_eq!(record.len(), *index);
                record.push(m);
            }
            Op::Cond { qubit, pauli, parity } => {
                let mut c = S::plus();
                for &i in parity {
                    c.add(&record[i].outcome);
                }
                t.apply_pauli_if(&PauliString::single(n, *qubit, *pauli), &c)?;
            }
        }
    }
    Ok(record)
}

/// Runs from `init` with fair-coin outcomes drawn from `rng`.
pub fn run_concrete(
    c: &Circuit,
    init: &StabilizerTableau,
    rng: &mut impl Rng,
) -> Result<(StabilizerTableau, Vec<bool>), CircuitError> {
    let mut t = init.clone();
    let rec = run_tableau(&Program::compile(c), &mut t, |_| rng.random::<bool>())?;
    Ok((t, rec.into_iter().map(|m| m.outcome).collect()))
}

/// Runs from `init`, taking random outcome `i` from `forced[i]`.
pub fn run_forced(
    c: &Circuit,
    init: &StabilizerTableau,
    forced: &[bool],
) -> Result<(StabilizerTableau, Vec<Measurement<bool>>), CircuitError> {
    let mut t = init.clone();
    let rec = run_tableau(&Program::compile(c), &mut t, |i| forced[i])?;
    Ok((t, rec))
}

/// A parity of measurement outcomes that is fixed in the noiseless circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Detector {
    pub measurements: Vec<usize>,
    pub expected: bool,
}

/// Result of running a circuit with every random outcome kept symbolic.
#[derive(Clone, Debug)]
pub struct SymbolicRun {
    pub tableau: StabilizerTableau<AffineSign>,
    /// Outcome of measurement `i` as an affine function of the random
    /// outcomes; random measurement `i` is the variable `m_i` itself.
    pub record: Vec<Measurement<AffineSign>>,
}

impl SymbolicRun {
    pub fn random_measurements(&self) -> Vec<usize> {
        (0..self.record.len())
            .filter(|&i| !self.record[i].deterministic)
            .collect()
    }

    /// One detector per deterministic measurement: its outcome XOR the
    /// random outcomes it depends on equals a constant.
    pub fn detectors(&self) -> Vec<Detector> {
        self.record
            .iter()
            .enumerate()
            .filter(|(_, m)| m.deterministic)
            .map(|(i, m)| {
                let mut ms = m.outcome.variables();
                ms.push(i);
                ms.sort_unstable();
                Detector {
                    measurements: ms,
                    expected: m.outcome.constant,
                }
            })
            .collect()
    }

    /// Whether `p` (with sign) stabilizes the final state in every branch.
    pub fn stabilized_in_every_branch(&self, p: &PauliString) -> Result<bool, CircuitError> {
        Ok(match self.tableau.expectation(p)? {
            Some(s) => s.as_constant() == Some(false),
            None => false,
        })
    }
}

/// Runs `c` on `init` covering all measurement branches at once.
pub fn run_symbolic(c: &Circuit, init: &StabilizerTableau) -> Result<SymbolicRun, CircuitError> {
    let mut t = init.to_affine();
    let record = run_tableau(&Program::compile(c), &mut t, AffineSign::var)?;
    Ok(SymbolicRun { tableau: t, record })
}

/// Pushes a frame through one operation. Conditional gates fire on the
/// parity of recorded flips.
pub fn propagate(frame: &mut PauliFrame, op: &Op) {
    match op {
        Op::Gate(g) => frame.apply(g),
        Op::Measure { qubit, basis, .. } => {
            match basis {
                MeasBasis::Z => frame.measure_z(*qubit),
                MeasBasis::X => frame.measure_x(*qubit),
            };
        }
        Op::Cond { qubit, pauli, parity } => {
            if frame.parity(parity) {
                frame.inject_single(*qubit, *pauli);
            }
        }
    }
}

/// `(x | z)` bits of a Pauli restricted to `wires`, as a new Pauli on
/// `wires.len()` qubits.
pub(crate) fn restrict_bits(x: &BitVec, z: &BitVec, wires: &[usize]) -> PauliString {
    let mut p = PauliString::identity(wires.len());
    for (i, &w) in wires.iter().enumerate() {
        if x.get(w) {
            p.x.set(i, true);
        }
        if z.get(w) {
            p.z.set(i, true);
        }
    }
    p
}
