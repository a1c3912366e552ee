use std::collections::BTreeMap;

use super::{gen_bell_bridge, pack_layers, Circuit, CircuitError, Gate, MeasBasis};
use crate::codes::{CodeError, CodeSpec, LogicalGate};
use crate::stab::{Clifford, PauliString, StabilizerTableau};

/// A code block measured during teleportation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasuredBlock {
    pub basis: MeasBasis,
    /// Record index of the measurement of each block qubit.
    pub measurements: Vec<usize>,
}

/// Physical circuit of the hybrid scheme together with everything needed
/// to check and decode it.
#[derive(Clone, Debug)]
pub struct HybridCircuit {
    pub code: CodeSpec,
    pub circuit: Circuit,
    /// Noiseless starting state: encoded data blocks, `|0⟩` elsewhere.
    pub init: StabilizerTableau,
    /// Wire carrying logical qubit `q` after teleportation.
    pub outputs: Vec<usize>,
    /// State the logical circuit prepares on `|0…0⟩`.
    pub target: StabilizerTableau,
    pub blocks: Vec<MeasuredBlock>,
    /// Index of the first feed-forward layer.
    pub feedforward_layer: usize,
    /// For each wire of a code block, the first layer at which the block
    /// holds its encoded state; `None` for physical and flag wires.
    pub established: Vec<Option<usize>>,
}

struct Layout {
    width: usize,
    n: usize,
    kappa: usize,
}

impl Layout {
    fn data(&self, b: usize, j: usize) -> usize {
        b * self.width + j
    }
    fn bridge(&self, b: usize, l: usize) -> usize {
        b * self.width + self.n + l
    }
    fn block_of(&self, logical: usize) -> (usize, usize) {
        (logical / self.kappa, logical % self.kappa)
    }
}

fn not_transversal(g: &Clifford, c: &CodeSpec) -> CircuitError {
    CircuitError::Code(CodeError::NotTransversal {
        gate: g.to_string(),
        code: c.id.to_string(),
    })
}

/// Logical gate a single-block Clifford corresponds to, if any.
fn in_block_gate(g: &Clifford, kappa: usize) -> Option<LogicalGate> {
    let s = |q: usize| q % kappa;
    match *g {
        Clifford::X(q) => Some(LogicalGate::X(s(q))),
        Clifford::Z(q) => Some(LogicalGate::Z(s(q))),
        Clifford::H(_) if kappa == 1 => Some(LogicalGate::H),
        Clifford::Cz(a, b) => Some(LogicalGate::Cz(s(a).min(s(b)), s(a).max(s(b)))),
        _ => None,
    }
}

/// Assembles the hybrid scheme for `logical_prep`: encoded preparation
/// through transversal gates, a Bell bridge per block, teleportation onto
/// the bridge's physical qubits and feed-forward corrections.
///
/// Leading gates of a block that have no transversal form and act only
/// within that block are folded into its noiseless encoded initial state.
pub fn assemble_hybrid(c: &CodeSpec, logical_prep: &Circuit) -> Result<HybridCircuit, CircuitError> {
    if !c.is_css() || c.logical_x.iter().any(|p| !p.z.is_zero()) || c.logical_z.iter().any(|p| !p.x.is_zero()) {
        return Err(CircuitError::Unsupported(format!(
            "{} needs CSS checks and logical operators",
            c.id
        )));
    }
    let big_n = logical_prep.n_qubits();
    let kappa = c.kappa;
    if !big_n.is_multiple_of(kappa) {
        return Err(CircuitError::Unsupported(format!(
            "{big_n} logical qubits do not fill blocks of {kappa}"
        )));
    }
    let n_blocks = big_n / kappa;
    let bridge = gen_bell_bridge(c)?;
    let lay = Layout {
        width: c.n + bridge.circuit.n_qubits(),
        n: c.n,
        kappa,
    };
    let wires = n_blocks * lay.width;

    let mut open = vec![true; n_blocks];
    let mut absorbed: Vec<Vec<Clifford>> = vec![Vec::new(); n_blocks];
    let mut data_layers: Vec<Vec<Gate>> = Vec::new();
    for layer in logical_prep.layers() {
        let mut cnots: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        let mut paulis: BTreeMap<usize, PauliString> = BTreeMap::new();
        let mut emitted: Vec<Clifford> = Vec::new();
        let mut closing = Vec::new();
        for gate in layer {
            let Gate::Clifford(g) = gate else {
                return Err(CircuitError::Unsupported(format!(
                    "logical circuit contains non-unitary {gate}"
                )));
            };
            let (a, b) = g.qubits();
            let (ba, sa) = lay.block_of(a);
            match b.map(|b| lay.block_of(b)) {
                Some((bb, sb)) if bb != ba => {
                    if !matches!(g, Clifford::Cnot(..)) || sa != sb {
                        return Err(not_transversal(g, c));
                    }
                    cnots.entry((ba, bb)).or_default().push((sa, sb));
                    closing.extend([ba, bb]);
                }
                _ => {
                    let lg = in_block_gate(g, kappa).filter(|lg| c.transversal_table.contains_key(lg));
                    match lg {
                        None if open[ba] => absorbed[ba].push(g.map_qubits(|q| q % kappa)),
                        None => return Err(not_transversal(g, c)),
                        Some(LogicalGate::X(i)) | Some(LogicalGate::Z(i)) => {
                            let p = paulis.entry(ba).or_insert_with(|| PauliString::identity(c.n));
                            let part = if matches!(g, Clifford::X(_)) {
                                &c.logical_x[i]
                            } else {
                                &c.logical_z[i]
                            };
                            p.mul_assign_unsigned(part);
                            closing.push(ba);
                        }
                        Some(lg) => {
                            emitted.extend(
                                c.transversal(&lg, &[0])?
                                    .iter()
                                    .map(|p| p.map_qubits(|q| lay.data(ba, q))),
                            );
                            closing.push(ba);
                        }
                    }
                }
            }
        }
        for ((bc, bt), pairs) in cnots {
            if pairs.len() != kappa {
                return Err(CircuitError::Code(CodeError::NotTransversal {
                    gate: format!("partial CNOT between blocks {bc} and {bt}"),
                    code: c.id.to_string(),
                }));
            }
            emitted.extend(c.transversal(&LogicalGate::Cnot, &[0, 1])?.iter().map(|p| {
                p.map_qubits(|q| {
                    if q < c.n {
                        lay.data(bc, q)
                    } else {
                        lay.data(bt, q - c.n)
                    }
                })
            }));
        }
        for (b, p) in paulis {
            for q in p.x.iter_ones() {
                emitted.push(Clifford::X(lay.data(b, q)));
            }
            for q in p.z.iter_ones() {
                emitted.push(Clifford::Z(lay.data(b, q)));
            }
        }
        for b in closing {
            open[b] = false;
        }
        data_layers.extend(pack_layers(emitted.into_iter().map(Gate::Clifford)));
    }

    // Initial state, block by block in wire order.
    let mut init: Option<StabilizerTableau> = None;
    let bridge_zero = StabilizerTableau::new(bridge.circuit.n_qubits());
    for gates in &absorbed {
        let mut lt = StabilizerTableau::new(kappa);
        lt.apply_all(gates)?;
        let block = c.encode_state(&lt)?.tensor(&bridge_zero);
        init = Some(match init {
            None => block,
            Some(t) => t.tensor(&block),
        });
    }
    let init = init.unwrap_or_else(|| StabilizerTableau::new(0));

    let label = |b: usize, l: &str| format!("b{b}_{l}");
    let bridge_depth = bridge.circuit.depth();
    let total = data_layers.len().max(bridge_depth);
    let bridge_start = total - bridge_depth;
    let mut layers: Vec<Vec<Gate>> = Vec::with_capacity(total + 4);
    for t in 0..total {
        let mut layer = data_layers.get(t).cloned().unwrap_or_default();
        if t >= bridge_start {
            for b in 0..n_blocks {
                layer.extend(
                    bridge.circuit.layers()[t - bridge_start]
                        .iter()
                        .map(|g| g.remap(|q| lay.bridge(b, q), |l| label(b, l))),
                );
            }
        }
        layers.push(layer);
    }
    let resource = |b: usize, j: usize| lay.bridge(b, bridge.code_qubits[j]);
    let phys = |b: usize, i: usize| lay.bridge(b, bridge.physical[i]);

    let mut teleport = Vec::new();
    let mut measure = Vec::new();
    for b in 0..n_blocks {
        for j in 0..c.n {
            teleport.push(Gate::Clifford(Clifford::Cnot(lay.data(b, j), resource(b, j))));
            measure.push(Gate::MeasureX {
                qubit: lay.data(b, j),
                label: label(b, &format!("d{j}")),
            });
            measure.push(Gate::MeasureZ {
                qubit: resource(b, j),
                label: label(b, &format!("r{j}")),
            });
        }
    }
    let mut cond_x = Vec::new();
    let mut cond_z = Vec::new();
    for b in 0..n_blocks {
        for i in 0..kappa {
            cond_x.push(Gate::CondX {
                qubit: phys(b, i),
                condition: c.logical_z[i]
                    .support()
                    .iter()
                    .map(|j| label(b, &format!("r{j}")))
                    .collect(),
            });
            cond_z.push(Gate::CondZ {
                qubit: phys(b, i),
                condition: c.logical_x[i]
                    .support()
                    .iter()
                    .map(|j| label(b, &format!("d{j}")))
                    .collect(),
            });
        }
    }
    layers.extend([teleport, measure]);
    let feedforward_layer = layers.len();
    layers.extend([cond_x, cond_z]);
    let circuit = Circuit::from_layers(wires, layers)?;

    let mut blocks = Vec::new();
    for b in 0..n_blocks {
        for (basis, tag) in [(MeasBasis::X, 'd'), (MeasBasis::Z, 'r')] {
            blocks.push(MeasuredBlock {
                basis,
                measurements: (0..c.n)
                    .map(|j| {
                        circuit
                            .label_index(&label(b, &format!("{tag}{j}")))
                            .expect("teleport label")
                    })
                    .collect(),
            });
        }
    }
    let mut established = vec![None; wires];
    for b in 0..n_blocks {
        for j in 0..c.n {
            established[lay.data(b, j)] = Some(0);
            established[resource(b, j)] = Some(total);
        }
    }
    let outputs = (0..big_n)
        .map(|q| {
            let (b, i) = lay.block_of(q);
            phys(b, i)
        })
        .collect();
    let mut target = StabilizerTableau::new(big_n);
    target.apply_all(&logical_prep.cliffords()?)?;
    Ok(HybridCircuit {
        code: c.clone(),
        circuit,
        init,
        outputs,
        target,
        blocks,
        feedforward_layer,
        established,
    })
}
