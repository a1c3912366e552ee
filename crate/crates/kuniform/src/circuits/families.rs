use super::{Circuit, CircuitError, Gate};
use crate::stab::Clifford;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    /// Control on the lower index.
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outer {
    Keep,
    Remove,
    Orient(Dir),
}

use Dir::{Down, Up};
use Outer::{Keep, Orient, Remove};

/// `(parity, orientation, treatment of the first and last pair)`.
type Brick = (usize, Dir, Outer);

const SURFACE_K1: &[Brick] = &[(0, Up, Keep), (1, Up, Keep)];
const SURFACE_K2: &[Brick] = &[(0, Up, Remove), (1, Down, Keep), (0, Down, Orient(Up)), (1, Up, Keep)];
const SURFACE_K3: &[Brick] = &[
    (0, Up, Remove),
    (1, Down, Keep),
    (0, Down, Keep),
    (1, Down, Keep),
    (0, Up, Keep),
    (1, Up, Keep),
    (0, Up, Keep),
    (1, Up, Keep),
];
const SURFACE_K4: &[Brick] = &[
    (0, Up, Keep),
    (1, Down, Keep),
    (0, Down, Keep),
    (1, Down, Keep),
    (0, Up, Keep),
    (1, Up, Keep),
    (0, Down, Keep),
    (1, Down, Keep),
    (0, Up, Keep),
    (1, Up, Orient(Down)),
    (0, Up, Keep),
    (1, Up, Orient(Down)),
];

fn cnot(a: usize, b: usize, dir: Dir) -> Gate {
    match dir {
        Up => Gate::Clifford(Clifford::Cnot(a, b)),
        Down => Gate::Clifford(Clifford::Cnot(b, a)),
    }
}

fn brick_layer(n: usize, (parity, dir, outer): Brick) -> Vec<Gate> {
    let starts: Vec<usize> = (parity..n.saturating_sub(1)).step_by(2).collect();
    let last = starts.len().saturating_sub(1);
    starts
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| {
            let boundary = i == 0 || i == last;
            match (boundary, outer) {
                (true, Remove) => None,
                (true, Orient(d)) => Some(cnot(a, a + 1, d)),
                _ => Some(cnot(a, a + 1, dir)),
            }
        })
        .collect()
}

/// Sorts each layer by lowest qubit and drops empty layers.
fn finish(n: usize, layers: Vec<Vec<Gate>>) -> Result<Circuit, CircuitError> {
    let layers = layers
        .into_iter()
        .filter(|l| !l.is_empty())
        .map(|mut l| {
            l.sort_by_key(|g| g.qubits().into_iter().min());
            l
        })
        .collect();
    Circuit::from_layers(n, layers)
}

fn check_k(k: usize, thresholds: &[usize], n: usize) -> Result<(), CircuitError> {
    let min = *thresholds.get(k.wrapping_sub(1)).ok_or(CircuitError::UnsupportedK(k))?;
    if !n.is_multiple_of(2) {
        return Err(CircuitError::OddN(n));
    }
    if n < min {
        return Err(CircuitError::BelowThreshold { k, n, min });
    }
    Ok(())
}

/// Brickwork CNOT circuit on `|0⟩^⊗N` whose output is `k`-uniform, with `H`
/// on every even qubit first. `N` must be even.
pub fn gen_surface_kuniform(k: usize, n: usize) -> Result<Circuit, CircuitError> {
    check_k(k, &[2, 6, 12, 18], n)?;
    let bricks = [SURFACE_K1, SURFACE_K2, SURFACE_K3, SURFACE_K4][k - 1];
    let mut layers = vec![(0..n).step_by(2).map(|q| Gate::Clifford(Clifford::H(q))).collect()];
    layers.extend(bricks.iter().map(|&b| brick_layer(n, b)));
    finish(n, layers)
}

/// Orientation rule and CZ omissions of one color-family time step.
#[derive(Clone, Copy, Debug)]
struct ColorRule {
    k: usize,
}

impl ColorRule {
    /// Whether the block pair `(a, a + 1)` in a layer of `parity` has its
    /// control on the higher block.
    fn control_high(&self, parity: usize, a: usize) -> bool {
        match self.k {
            2 => parity == 0,
            3 => a >= 2,
            4 => a >= 5,
            _ => true,
        }
    }

    fn skips_cz(&self, block: usize, blocks: usize) -> bool {
        if self.k != 4 {
            return false;
        }
        let tail = if blocks.is_multiple_of(2) {
            blocks - 1
        } else {
            blocks - 2
        };
        block == 2 || block == tail
    }

    fn steps(&self) -> usize {
        match self.k {
            3 => 2,
            4 => 3,
            _ => 1,
        }
    }
}

/// One time step on two-qubit blocks: in-block CZ, then block CNOTs on even
/// and odd block pairs. A block CNOT pairs qubit `j` of one block with qubit
/// `j` of the other.
fn color_step(rule: ColorRule, n: usize) -> Vec<Vec<Gate>> {
    let blocks = n / 2;
    let cz = (0..blocks)
        .filter(|&b| !rule.skips_cz(b, blocks))
        .map(|b| Gate::Clifford(Clifford::Cz(2 * b, 2 * b + 1)))
        .collect();
    let mut layers = vec![cz];
    for parity in 0..2 {
        let mut layer = Vec::new();
        for a in (parity..blocks.saturating_sub(1)).step_by(2) {
            let (c, t) = if rule.control_high(parity, a) {
                (a + 1, a)
            } else {
                (a, a + 1)
            };
            for j in 0..2 {
                layer.push(Gate::Clifford(Clifford::Cnot(2 * c + j, 2 * t + j)));
            }
        }
        layers.push(layer);
    }
    layers
}

fn h_layer(n: usize) -> Vec<Gate> {
    (0..n).map(|q| Gate::Clifford(Clifford::H(q))).collect()
}

/// Color-family circuit: `H` on every qubit, then the time steps for `k`.
pub fn gen_color_kuniform(k: usize, n: usize) -> Result<Circuit, CircuitError> {
    check_k(k, &[2, 6, 10, 20], n)?;
    let rule = ColorRule { k };
    let mut layers = vec![h_layer(n)];
    for _ in 0..rule.steps() {
        layers.extend(color_step(rule, n));
    }
    finish(n, layers)
}

fn repeated_step(base_k: usize, reps: usize, n: usize) -> Result<Circuit, CircuitError> {
    let rule = ColorRule { k: base_k };
    let mut layers = vec![h_layer(n)];
    for _ in 0..reps {
        layers.extend(color_step(rule, n));
    }
    finish(n, layers)
}

/// Approximate constructions for `k ∈ {5, 6, 7}` built from repeated single
/// time steps of the color family.
pub fn gen_approx_kuniform(k: usize, n: usize) -> Result<Circuit, CircuitError> {
    let (base, reps, min) = match k {
        5 => (3, 3, 20),
        6 => (1, 5, 24),
        7 => (3, 5, 32),
        _ => return Err(CircuitError::UnsupportedK(k)),
    };
    if !n.is_multiple_of(2) {
        return Err(CircuitError::OddN(n));
    }
    if n < min {
        return Err(CircuitError::BelowThreshold { k, n, min });
    }
    repeated_step(base, reps, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayFamily {
    /// Repetitions of one `k = 1` color time step.
    C1,
    /// Repetitions of one `k = 3` color time step.
    C3,
}

impl std::str::FromStr for DecayFamily {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C1" | "c1" => Ok(DecayFamily::C1),
            "C3" | "c3" => Ok(DecayFamily::C3),
            _ => Err(CircuitError::Unsupported(format!("decay family {s:?}"))),
        }
    }
}

/// `depth` repetitions of the family's time step on `|+⟩^⊗N`.
pub fn gen_decay_circuit(family: DecayFamily, n: usize, depth: usize) -> Result<Circuit, CircuitError> {
    if !n.is_multiple_of(2) {
        return Err(CircuitError::OddN(n));
    }
    let base = match family {
        DecayFamily::C1 => 1,
        DecayFamily::C3 => 3,
    };
    repeated_step(base, depth, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GhzVariant {
    /// Measurement and feed-forward circuit of fixed depth.
    ConstDepth,
    /// Doubling CNOT fan-out.
    LogDepth,
}

impl std::str::FromStr for GhzVariant {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const" | "const_depth" => Ok(GhzVariant::ConstDepth),
            "log" | "log_depth" => Ok(GhzVariant::LogDepth),
            _ => Err(CircuitError::Unsupported(format!("GHZ variant {s:?}"))),
        }
    }
}

/// Wire layout of the constant-depth circuit: data wires of each group of
/// up to two qubits and the measured wires between consecutive groups.
struct ConstLayout {
    groups: Vec<Vec<usize>>,
    measured: Vec<Vec<usize>>,
    wires: usize,
}

fn const_layout(n: usize) -> ConstLayout {
    let sizes: Vec<usize> = (0..n.div_ceil(2)).map(|g| (n - 2 * g).min(2)).collect();
    let mut next = 0;
    let mut take = |k: usize| {
        let w: Vec<usize> = (next..next + k).collect();
        next += k;
        w
    };
    let mut groups = Vec::new();
    let mut measured = Vec::new();
    for (g, &s) in sizes.iter().enumerate() {
        groups.push(take(s));
        if g + 1 < sizes.len() {
            measured.push(take(sizes[g + 1]));
        }
    }
    ConstLayout {
        groups,
        measured,
        wires: next,
    }
}

/// Wires carrying the GHZ state, in order.
pub fn ghz_output_qubits(n: usize, variant: GhzVariant) -> Vec<usize> {
    match variant {
        GhzVariant::LogDepth => (0..n).collect(),
        GhzVariant::ConstDepth => const_layout(n).groups.concat(),
    }
}

/// GHZ preparation on `N` qubits.
///
/// The constant-depth variant joins groups of two with measured parity
/// wires and fixes every group against the last one by feed-forward `X`.
pub fn gen_ghz(n: usize, variant: GhzVariant) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::Unsupported(format!("GHZ needs N >= 2, got {n}")));
    }
    let cx = |a, b| Gate::Clifford(Clifford::Cnot(a, b));
    match variant {
        GhzVariant::LogDepth => {
            let mut layers = vec![vec![Gate::Clifford(Clifford::H(0))]];
            let mut span = 1;
            while span < n {
                layers.push((0..span).filter(|i| i + span < n).map(|i| cx(i, i + span)).collect());
                span *= 2;
            }
            finish(n, layers)
        }
        GhzVariant::ConstDepth => {
            let ConstLayout {
                groups,
                measured,
                wires,
            } = const_layout(n);
            let label = |w: usize| format!("m{w}");
            let mut layers = vec![
                groups.iter().map(|g| Gate::Clifford(Clifford::H(g[0]))).collect(),
                groups.iter().filter(|g| g.len() == 2).map(|g| cx(g[0], g[1])).collect(),
            ];
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut meas = Vec::new();
            for (s, m) in measured.iter().enumerate() {
                for (j, &w) in m.iter().enumerate() {
                    left.push(cx(groups[s][j], w));
                    right.push(cx(groups[s + 1][j], w));
                    meas.push(Gate::MeasureZ {
                        qubit: w,
                        label: label(w),
                    });
                }
            }
            layers.extend([left, right, meas]);
            let mut cond = Vec::new();
            for (g, group) in groups.iter().enumerate() {
                for (j, &q) in group.iter().enumerate() {
                    let condition: Vec<String> = measured[g.min(measured.len())..]
                        .iter()
                        .map(|m| label(*m.get(j).unwrap_or(&m[0])))
                        .collect();
                    if !condition.is_empty() {
                        cond.push(Gate::CondX { qubit: q, condition });
                    }
                }
            }
            layers.push(cond);
            finish(wires, layers)
        }
    }
}
