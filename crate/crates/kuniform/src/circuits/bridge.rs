use super::{pack_layers, Circuit, CircuitError, Gate};
use crate::codes::{CodeId, CodeSpec};
use crate::stab::Clifford;

/// A circuit from `|0…0⟩` preparing, for every logical qubit `i` of one
/// code block, the pair `(|0̄0⟩ + |1̄1⟩)/√2` between logical `i` and the
/// physical qubit `physical[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellBridge {
    pub circuit: Circuit,
    /// Wire of each code-block qubit, in block order.
    pub code_qubits: Vec<usize>,
    pub physical: Vec<usize>,
    /// Measured check qubits.
    pub flags: Vec<usize>,
}

use Clifford::{Cnot, Cz, H};

fn layers_of(n: usize, gates: Vec<Clifford>) -> Result<Circuit, CircuitError> {
    Circuit::from_layers(n, sorted(pack_layers(gates.into_iter().map(Gate::Clifford))))
}

fn sorted(layers: Vec<Vec<Gate>>) -> Vec<Vec<Gate>> {
    layers
        .into_iter()
        .map(|mut l| {
            l.sort_by_key(|g| g.qubits().into_iter().min());
            l
        })
        .collect()
}

fn steane_bridge() -> Result<BellBridge, CircuitError> {
    let gates = vec![
        H(0),
        H(1),
        H(2),
        H(3),
        Cnot(0, 7),
        Cnot(1, 5),
        Cnot(2, 6),
        Cnot(0, 6),
        Cnot(1, 4),
        Cnot(1, 0),
        Cnot(3, 6),
        Cnot(2, 1),
        Cnot(3, 4),
        Cnot(6, 5),
    ];
    Ok(BellBridge {
        circuit: layers_of(8, gates)?,
        code_qubits: (0..7).collect(),
        physical: vec![7],
        flags: vec![],
    })
}

/// Wire order of the printed surface bridge mapped onto the row-major
/// layout used by [`crate::codes`].
const SURFACE3_WIRES: [usize; 10] = [2, 1, 0, 3, 5, 8, 7, 6, 4, 9];

fn surface3_bridge() -> Result<BellBridge, CircuitError> {
    let printed = vec![
        H(0),
        H(2),
        H(4),
        H(6),
        H(8),
        Cnot(0, 1),
        Cnot(2, 3),
        Cnot(4, 5),
        Cnot(6, 7),
        Cnot(8, 9),
        Cnot(8, 7),
        Cnot(2, 8),
        Cnot(4, 7),
        Cnot(8, 1),
        Cnot(4, 8),
    ];
    let gates = printed.iter().map(|g| g.map_qubits(|q| SURFACE3_WIRES[q])).collect();
    Ok(BellBridge {
        circuit: layers_of(10, gates)?,
        code_qubits: (0..9).collect(),
        physical: vec![9],
        flags: vec![],
    })
}

fn color_bridge() -> Result<BellBridge, CircuitError> {
    let g = Gate::Clifford;
    let layers = vec![
        vec![g(H(0)), g(H(1)), g(H(3))],
        vec![g(Cnot(0, 4)), g(Cnot(1, 5)), g(Cnot(3, 2))],
        vec![g(Cnot(3, 1))],
        vec![g(Cnot(0, 2))],
        vec![g(Cnot(1, 0)), g(H(6)), g(H(7))],
        vec![g(Cz(6, 1))],
        vec![g(Cz(6, 2)), g(Cnot(7, 1))],
        vec![g(Cz(6, 4)), g(Cnot(7, 2))],
        vec![g(Cz(6, 5)), g(Cnot(7, 4))],
        vec![g(Cnot(7, 5))],
        vec![g(H(6)), g(H(7))],
        vec![
            Gate::MeasureZ {
                qubit: 6,
                label: "f6".into(),
            },
            Gate::MeasureZ {
                qubit: 7,
                label: "f7".into(),
            },
        ],
    ];
    Ok(BellBridge {
        circuit: Circuit::from_layers(8, sorted(layers))?,
        code_qubits: (0..4).collect(),
        physical: vec![4, 5],
        flags: vec![6, 7],
    })
}

/// The printed bridge for the Steane, distance-3 surface and `[4,2,2]`
/// codes; other CSS codes get [`synthesize_bell_bridge`].
pub fn gen_bell_bridge(c: &CodeSpec) -> Result<BellBridge, CircuitError> {
    match c.id {
        CodeId::Steane713 => steane_bridge(),
        CodeId::Surface(3) => surface3_bridge(),
        CodeId::Color422 => color_bridge(),
        _ => synthesize_bell_bridge(c),
    }
}

/// Encodes `|+̄…+̄⟩` from the row-reduced X-type generators, then copies
/// each logical `Z̄ᵢ` parity onto its physical qubit.
pub fn synthesize_bell_bridge(c: &CodeSpec) -> Result<BellBridge, CircuitError> {
    if !c.is_css() {
        return Err(CircuitError::Unsupported(format!("{} is not a CSS code", c.id)));
    }
    let n = c.n;
    let mut rows: Vec<Vec<bool>> = c
        .stabilizers
        .iter()
        .filter(|s| !s.x.is_zero())
        .chain(&c.logical_x)
        .map(|s| s.x.to_bools())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] {
                let pivot_row = rows[r].clone();
                for (a, b) in rows[i].iter_mut().zip(pivot_row) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut gates: Vec<Clifford> = pivots.iter().map(|&p| H(p)).collect();
    for (row, &p) in rows.iter().zip(&pivots) {
        for (j, &bit) in row.iter().enumerate() {
            if bit && j != p {
                gates.push(Cnot(p, j));
            }
        }
    }
    let physical: Vec<usize> = (n..n + c.kappa).collect();
    for (i, lz) in c.logical_z.iter().enumerate() {
        for q in lz.support() {
            gates.push(Cnot(q, physical[i]));
        }
    }
    Ok(BellBridge {
        circuit: layers_of(n + c.kappa, gates)?,
        code_qubits: (0..n).collect(),
        physical,
        flags: vec![],
    })
}
