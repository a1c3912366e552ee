//! Circuit representation, the `.qc` text format, execution on tableaus and
//! Pauli frames, and generators for the circuit families.

mod bridge;
mod exec;
mod families;
mod hybrid;
mod lightcone;
mod text;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::codes::CodeError;
use crate::stab::{Clifford, StabError};

pub use bridge::{gen_bell_bridge, synthesize_bell_bridge, BellBridge};
pub(crate) use exec::restrict_bits;
pub use exec::{
    propagate, run_concrete, run_forced, run_symbolic, run_tableau, Detector, MeasBasis, Op, Program, SymbolicRun,
};
pub use families::{
    gen_approx_kuniform, gen_color_kuniform, gen_decay_circuit, gen_ghz, gen_surface_kuniform, ghz_output_qubits,
    DecayFamily, GhzVariant,
};
pub use hybrid::{assemble_hybrid, HybridCircuit, MeasuredBlock};
pub use lightcone::{min_depth_lightcone, Architecture};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("qubit {qubit} used twice in layer {layer}")]
    Overlap { layer: usize, qubit: usize },
    #[error("layer {0} is empty")]
    EmptyLayer(usize),
    #[error("undefined measurement label {0:?}")]
    UndefinedLabel(String),
    #[error("measurement label {0:?} defined twice")]
    DuplicateLabel(String),
    #[error("invalid measurement label {0:?}")]
    BadLabel(String),
    #[error("conditional gate has an empty condition")]
    EmptyCondition,
    #[error("k = {0} is not supported by this family")]
    UnsupportedK(usize),
    #[error("N = {n} is below the minimum {min} for k = {k}")]
    BelowThreshold { k: usize, n: usize, min: usize },
    #[error("N = {0} must be even")]
    OddN(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Stab(#[from] StabError),
}

/// One operation of a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Clifford(Clifford),
    MeasureZ {
        qubit: usize,
        label: String,
    },
    MeasureX {
        qubit: usize,
        label: String,
    },
    /// `X` on `qubit` if the parity of the listed outcomes is 1.
    CondX {
        qubit: usize,
        condition: Vec<String>,
    },
    CondZ {
        qubit: usize,
        condition: Vec<String>,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Clifford(c) => match c.qubits() {
                (a, Some(b)) => vec![a, b],
                (a, None) => vec![a],
            },
            Gate::MeasureZ { qubit, .. }
            | Gate::MeasureX { qubit, .. }
            | Gate::CondX { qubit, .. }
            | Gate::CondZ { qubit, .. } => vec![*qubit],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Clifford(c) if c.is_two_qubit())
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasureZ { .. } | Gate::MeasureX { .. })
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Gate::MeasureZ { label, .. } | Gate::MeasureX { label, .. } => Some(label),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<&[String]> {
        match self {
            Gate::CondX { condition, .. } | Gate::CondZ { condition, .. } => Some(condition),
            _ => None,
        }
    }

    /// Relabels qubits and measurement labels.
    pub fn remap(&self, q: impl Fn(usize) -> usize, l: impl Fn(&str) -> String) -> Gate {
        match self {
            Gate::Clifford(c) => Gate::Clifford(c.map_qubits(q)),
            Gate::MeasureZ { qubit, label } => Gate::MeasureZ {
                qubit: q(*qubit),
                label: l(label),
            },
            Gate::MeasureX { qubit, label } => Gate::MeasureX {
                qubit: q(*qubit),
                label: l(label),
            },
            Gate::CondX { qubit, condition } => Gate::CondX {
                qubit: q(*qubit),
                condition: condition.iter().map(|s| l(s)).collect(),
            },
            Gate::CondZ { qubit, condition } => Gate::CondZ {
                qubit: q(*qubit),
                condition: condition.iter().map(|s| l(s)).collect(),
            },
        }
    }
}

impl From<Clifford> for Gate {
    fn from(c: Clifford) -> Self {
        Gate::Clifford(c)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Clifford(c) => write!(f, "{c}"),
            Gate::MeasureZ { qubit, label } => write!(f, "MZ {qubit} -> {label}"),
            Gate::MeasureX { qubit, label } => write!(f, "MX {qubit} -> {label}"),
            Gate::CondX { qubit, condition } => write!(f, "X {qubit} if {}", condition.join("^")),
            Gate::CondZ { qubit, condition } => write!(f, "Z {qubit} if {}", condition.join("^")),
        }
    }
}

pub(crate) fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Layers of gates on disjoint qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
    labels: HashMap<String, usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            layers: Vec::new(),
            labels: HashMap::new(),
        }
    }

    pub fn from_layers(n_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n_qubits);
        for layer in layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates().filter(|g| g.is_two_qubit()).count()
    }

    pub fn n_measurements(&self) -> usize {
        self.labels.len()
    }

    /// Measurement labels in record order.
    pub fn measurement_labels(&self) -> Vec<String> {
        self.gates().filter_map(|g| g.label().map(str::to_owned)).collect()
    }

    /// Record index of a measurement label.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.get(label).copied()
    }

    /// Checks one gate against the circuit and the layer being built.
    fn check_gate(
        &self,
        g: &Gate,
        used: &mut [bool],
        layer: usize,
        new_labels: &mut Vec<String>,
    ) -> Result<(), CircuitError> {
        let qs = g.qubits();
        if let [a, b] = qs[..] {
            if a == b {
                return Err(CircuitError::SameQubit(a));
            }
        }
        for &q in &qs {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    n: self.n_qubits,
                });
            }
            if used[q] {
                return Err(CircuitError::Overlap { layer, qubit: q });
            }
        }
        if let Some(cond) = g.condition() {
            if cond.is_empty() {
                return Err(CircuitError::EmptyCondition);
            }
            for l in cond {
                if !self.labels.contains_key(l) {
                    return Err(CircuitError::UndefinedLabel(l.clone()));
                }
            }
        }
        if let Some(l) = g.label() {
            if !valid_label(l) {
                return Err(CircuitError::BadLabel(l.to_owned()));
            }
            if self.labels.contains_key(l) || new_labels.iter().any(|x| x == l) {
                return Err(CircuitError::DuplicateLabel(l.to_owned()));
            }
            new_labels.push(l.to_owned());
        }
        for &q in &qs {
            used[q] = true;
        }
        Ok(())
    }

    /// Appends a layer after checking qubit ranges, disjointness and labels.
    ///
    /// Conditions may only refer to outcomes from earlier layers.
    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<(), CircuitError> {
        let idx = self.layers.len();
        if layer.is_empty() {
            return Err(CircuitError::EmptyLayer(idx));
        }
        let mut used = vec![false; self.n_qubits];
        let mut new_labels = Vec::new();
        for g in &layer {
            self.check_gate(g, &mut used, idx, &mut new_labels)?;
        }
        self.commit(layer, new_labels);
        Ok(())
    }

    fn commit(&mut self, layer: Vec<Gate>, new_labels: Vec<String>) {
        for l in new_labels {
            let i = self.labels.len();
            self.labels.insert(l, i);
        }
        self.layers.push(layer);
    }

    /// Appends a layer of Clifford gates.
    pub fn push_cliffords(&mut self, layer: Vec<Clifford>) -> Result<(), CircuitError> {
        self.push_layer(layer.into_iter().map(Gate::Clifford).collect())
    }

    /// Appends all layers of `other`, which must act on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for l in other.layers() {
            self.push_layer(l.clone())?;
        }
        Ok(())
    }

    /// Qubits touched by at least one gate.
    pub fn touched(&self) -> Vec<bool> {
        let mut t = vec![false; self.n_qubits];
        for g in self.gates() {
            for q in g.qubits() {
                t[q] = true;
            }
        }
        t
    }

    /// All Clifford gates in order; measurements and conditionals are
    /// rejected.
    pub fn cliffords(&self) -> Result<Vec<Clifford>, CircuitError> {
        self.gates()
            .map(|g| match g {
                Gate::Clifford(c) => Ok(*c),
                other => Err(CircuitError::Unsupported(format!(
                    "non-unitary gate {other} in a unitary circuit"
                ))),
            })
            .collect()
    }

    pub fn serialize(&self) -> String {
        text::serialize(self)
    }

    pub fn parse(src: &str) -> Result<Circuit, CircuitError> {
        text::parse(src)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Packs gates into layers in order, starting a new layer whenever a gate
/// touches a qubit already used in the current one or is conditioned on a
/// measurement made in it.
pub fn pack_layers(gates: impl IntoIterator<Item = Gate>) -> Vec<Vec<Gate>> {
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    let mut used: Vec<usize> = Vec::new();
    let mut measured: Vec<String> = Vec::new();
    for g in gates {
        let qs = g.qubits();
        let depends = g.condition().is_some_and(|c| c.iter().any(|l| measured.contains(l)));
        if layers.is_empty() || depends || qs.iter().any(|q| used.contains(q)) {
            layers.push(Vec::new());
            used.clear();
            measured.clear();
        }
        used.extend(&qs);
        measured.extend(g.label().map(str::to_owned));
        layers.last_mut().expect("layer exists").push(g);
    }
    layers
}
