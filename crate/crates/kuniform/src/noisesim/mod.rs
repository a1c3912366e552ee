//! Monte-Carlo Pauli-frame simulation of circuits under idle, one-qubit,
//! two-qubit and measurement depolarizing noise.
//!
//! Faults are sampled sparsely per location class and pushed through the
//! circuit as a Pauli frame relative to the noiseless reference run. A shot
//! is correct when the residual error on the output wires lies in the
//! target state's stabilizer group (signs ignored).

mod sweep;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{
    propagate, run_symbolic, Circuit, CircuitError, Detector, Gate, HybridCircuit, MeasBasis, MeasuredBlock, Op,
    Program,
};
use crate::codes::{CodeError, CodeSpec, Decoder, Decoding};
use crate::stab::{BitVec, PauliFrame, PauliString, StabilizerGroup, StabilizerTableau};

pub use sweep::{compare_schemes, write_csv, NoiseGrid, SchemeSpec, Sweep, SweepRow, CSV_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("rate {name} = {value} is outside [0, 1]")]
    Rate { name: &'static str, value: f64 },
    #[error("target has {got} qubits but there are {expected} output wires")]
    TargetMismatch { expected: usize, got: usize },
    #[error("output wire {wire} out of range for {n} qubits")]
    OutputOutOfRange { wire: usize, n: usize },
    #[error("correction mode needs a code with a lookup decoder")]
    NoDecoder,
    #[error("shots must be at least 1")]
    NoShots,
    #[error("fault location {0} does not exist")]
    BadLocation(usize),
    #[error("fault Pauli code {code} is invalid at location {location}")]
    BadPauli { location: usize, code: u8 },
    #[error("sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Error rates per idle qubit-layer, one-qubit gate, two-qubit gate and
/// measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl NoiseModel {
    pub fn new(p0: f64, p1: f64, p2: f64, p3: f64) -> Result<Self, NoiseError> {
        let m = NoiseModel { p0, p1, p2, p3 };
        m.validate()?;
        Ok(m)
    }

    pub fn zero() -> Self {
        NoiseModel {
            p0: 0.0,
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
        }
    }

    /// `p0 = p/100`, `p1 = p/10`, `p2 = p3 = p`.
    pub fn scaled(p: f64) -> Result<Self, NoiseError> {
        Self::new(p / 100.0, p / 10.0, p, p)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, value) in [("p0", self.p0), ("p1", self.p1), ("p2", self.p2), ("p3", self.p3)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(NoiseError::Rate { name, value });
            }
        }
        Ok(())
    }

    pub fn rate(&self, kind: FaultKind) -> f64 {
        match kind {
            FaultKind::Idle => self.p0,
            FaultKind::OneQubit => self.p1,
            FaultKind::TwoQubit => self.p2,
            FaultKind::Measurement => self.p3,
        }
    }
}

/// How shots are accepted and corrected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    AcceptAll,
    /// Reject a shot when any detector fires.
    Detect,
    /// Decode the teleportation measurements of each block before the
    /// feed-forward layer.
    Correct,
}

impl std::str::FromStr for Mode {
    type Err = NoiseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "accept_all" | "none" => Ok(Mode::AcceptAll),
            "detect" => Ok(Mode::Detect),
            "correct" => Ok(Mode::Correct),
            _ => Err(NoiseError::Sweep(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaultKind {
    Idle,
    OneQubit,
    TwoQubit,
    Measurement,
}

const KINDS: [FaultKind; 4] = [
    FaultKind::Idle,
    FaultKind::OneQubit,
    FaultKind::TwoQubit,
    FaultKind::Measurement,
];

/// A place where a fault can occur, after the operation it follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub layer: usize,
    pub kind: FaultKind,
    pub qubits: (usize, Option<usize>),
}

impl Location {
    /// Number of non-identity fault Paulis at this location.
    pub fn n_paulis(&self) -> u8 {
        match self.kind {
            FaultKind::TwoQubit => 15,
            FaultKind::Measurement => 1,
            _ => 3,
        }
    }
}

/// A fault at a location. `pauli` packs one 2-bit code per qubit, low bits
/// first, with bit 0 for `X` and bit 1 for `Z`; measurement faults ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fault {
    pub location: usize,
    pub pauli: u8,
}

fn letter(code: u8) -> char {
    ['I', 'X', 'Z', 'Y'][(code & 3) as usize]
}

/// A fault drawn for one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateFault {
    /// Pauli letters on the gate's qubits, applied after the gate.
    Pauli(Vec<(usize, char)>),
    /// Inverted measurement outcome.
    Flip,
}

/// Draws the faults of one gate: at most one, at the gate's rate.
pub fn sample_faults(gate: &Gate, nm: &NoiseModel, rng: &mut impl Rng) -> Vec<GateFault> {
    let qs = gate.qubits();
    let (kind, rate) = if gate.is_measurement() {
        (FaultKind::Measurement, nm.p3)
    } else if qs.len() == 2 {
        (FaultKind::TwoQubit, nm.p2)
    } else {
        (FaultKind::OneQubit, nm.p1)
    };
    if rate <= 0.0 || !rng.random_bool(rate) {
        return Vec::new();
    }
    if kind == FaultKind::Measurement {
        return vec![GateFault::Flip];
    }
    let code = draw_pauli(kind, rng);
    vec![GateFault::Pauli(
        qs.iter()
            .enumerate()
            .map(|(i, &q)| (q, letter(code >> (2 * i))))
            .filter(|&(_, l)| l != 'I')
            .collect(),
    )]
}

fn draw_pauli(kind: FaultKind, rng: &mut impl Rng) -> u8 {
    match kind {
        FaultKind::TwoQubit => rng.random_range(1..16),
        FaultKind::Measurement => 0,
        _ => rng.random_range(1..4),
    }
}

/// Outcome of one shot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotResult {
    pub accepted: bool,
    /// Only meaningful for accepted shots; always false otherwise.
    pub correct: bool,
    /// Measurement outcomes as flips relative to the noiseless reference.
    pub outcome_bits: Vec<bool>,
}

/// Aggregate of many shots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub shots: u64,
    pub accepted: u64,
    pub correct: u64,
    pub seed: u64,
    /// `correct / accepted`; `None` when nothing was accepted.
    pub fidelity: Option<f64>,
    /// 95% Wilson interval for the fidelity.
    pub ci: Option<(f64, f64)>,
    pub acceptance_rate: f64,
}

impl FidelityEstimate {
    pub fn from_counts(shots: u64, accepted: u64, correct: u64, seed: u64) -> Self {
        let (fidelity, ci) = if accepted == 0 {
            (None, None)
        } else {
            (
                Some(correct as f64 / accepted as f64),
                Some(wilson_interval(correct, accepted, Z95)),
            )
        };
        FidelityEstimate {
            shots,
            accepted,
            correct,
            seed,
            fidelity,
            ci,
            acceptance_rate: accepted as f64 / shots as f64,
        }
    }

    pub fn infidelity(&self) -> Option<f64> {
        self.fidelity.map(|f| 1.0 - f)
    }

    /// Interval for the infidelity.
    pub fn infidelity_ci(&self) -> Option<(f64, f64)> {
        self.ci.map(|(lo, hi)| (1.0 - hi, 1.0 - lo))
    }
}

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

/// Random stream of shot `shot` under `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

enum Step {
    Op(Op),
    Decode,
}

/// Per-block decoding data for correction mode.
struct DecodeBlocks {
    code: CodeSpec,
    blocks: Vec<MeasuredBlock>,
    /// Supports of X-type and Z-type checks, with their syndrome positions.
    x_checks: Vec<(usize, Vec<usize>)>,
    z_checks: Vec<(usize, Vec<usize>)>,
}

/// A circuit prepared for noisy simulation.
pub struct Experiment {
    circuit: Circuit,
    init: StabilizerTableau,
    steps: Vec<Step>,
    /// Measurements performed before each step; one extra entry at the end.
    meas_before: Vec<usize>,
    locations: Vec<Location>,
    loc_step: Vec<usize>,
    by_kind: [Vec<usize>; 4],
    outputs: Vec<usize>,
    target: StabilizerGroup,
    decode: Option<DecodeBlocks>,
    detectors: OnceLock<Result<Vec<Detector>, CircuitError>>,
}

impl Experiment {
    /// A circuit started from `|0…0⟩` whose `outputs` should hold `target`.
    pub fn physical(circuit: &Circuit, outputs: &[usize], target: &StabilizerTableau) -> Result<Self, NoiseError> {
        let n = circuit.n_qubits();
        Self::build(
            circuit,
            StabilizerTableau::new(n),
            outputs,
            target,
            &vec![None; n],
            None,
        )
    }

    /// The hybrid scheme, with decoding before its feed-forward layer.
    pub fn hybrid(h: &HybridCircuit) -> Result<Self, NoiseError> {
        let code = &h.code;
        let mut x_checks = Vec::new();
        let mut z_checks = Vec::new();
        for (i, s) in code.stabilizers.iter().enumerate() {
            if s.z.is_zero() {
                x_checks.push((i, s.x.iter_ones().collect()));
            } else {
                z_checks.push((i, s.z.iter_ones().collect()));
            }
        }
        let decode = DecodeBlocks {
            code: code.clone(),
            blocks: h.blocks.clone(),
            x_checks,
            z_checks,
        };
        // Data blocks hold their encoded state from the start and can idle
        // before their first gate.
        let from_start: Vec<Option<usize>> = h.established.iter().map(|e| e.filter(|&l| l == 0)).collect();
        Self::build(
            &h.circuit,
            h.init.clone(),
            &h.outputs,
            &h.target,
            &from_start,
            Some((h.feedforward_layer, decode)),
        )
    }

    fn build(
        circuit: &Circuit,
        init: StabilizerTableau,
        outputs: &[usize],
        target: &StabilizerTableau,
        active_from: &[Option<usize>],
        decode: Option<(usize, DecodeBlocks)>,
    ) -> Result<Self, NoiseError> {
        let n = circuit.n_qubits();
        if let Some(&wire) = outputs.iter().find(|&&w| w >= n) {
            return Err(NoiseError::OutputOutOfRange { wire, n });
        }
        if target.n() != outputs.len() {
            return Err(NoiseError::TargetMismatch {
                expected: outputs.len(),
                got: target.n(),
            });
        }
        let program = Program::compile(circuit);
        let depth = program.layers.len();
        let mut first = active_from.to_vec();
        let mut last: Vec<Option<usize>> = vec![None; n];
        for (l, layer) in program.layers.iter().enumerate() {
            for op in layer {
                let (a, b) = op.qubits();
                for q in std::iter::once(a).chain(b) {
                    first[q].get_or_insert(l);
                    last[q] = Some(l);
                }
            }
        }
        for &q in outputs {
            if first[q].is_some() {
                last[q] = Some(depth.saturating_sub(1));
            }
        }

        let decode_layer = decode.as_ref().map(|(l, _)| *l);
        let mut steps = Vec::new();
        let mut meas_before = Vec::new();
        let mut locations = Vec::new();
        let mut loc_step = Vec::new();
        let mut measured = 0;
        let mut touched = vec![false; n];
        for (l, layer) in program.layers.iter().enumerate() {
            if decode_layer == Some(l) {
                steps.push(Step::Decode);
                meas_before.push(measured);
            }
            touched.iter_mut().for_each(|t| *t = false);
            for op in layer {
                let qubits = op.qubits();
                touched[qubits.0] = true;
                if let Some(b) = qubits.1 {
                    touched[b] = true;
                }
                let kind = match op {
                    Op::Measure { .. } => FaultKind::Measurement,
                    Op::Gate(g) if g.is_two_qubit() => FaultKind::TwoQubit,
                    _ => FaultKind::OneQubit,
                };
                meas_before.push(measured);
                if matches!(op, Op::Measure { .. }) {
                    measured += 1;
                }
                steps.push(Step::Op(op.clone()));
                locations.push(Location { layer: l, kind, qubits });
                loc_step.push(steps.len() - 1);
            }
            for q in 0..n {
                let active = matches!((first[q], last[q]), (Some(a), Some(b)) if a <= l && l <= b);
                if active && !touched[q] {
                    locations.push(Location {
                        layer: l,
                        kind: FaultKind::Idle,
                        qubits: (q, None),
                    });
                    loc_step.push(steps.len() - 1);
                }
            }
        }
        meas_before.push(measured);
        let mut by_kind: [Vec<usize>; 4] = Default::default();
        for (i, loc) in locations.iter().enumerate() {
            by_kind[KINDS.iter().position(|&k| k == loc.kind).expect("kind")].push(i);
        }
        Ok(Experiment {
            circuit: circuit.clone(),
            init,
            steps,
            meas_before,
            locations,
            loc_step,
            by_kind,
            outputs: outputs.to_vec(),
            target: StabilizerGroup::new(outputs.len(), target.stabilizers().iter()),
            decode: decode.map(|(_, d)| d),
            detectors: OnceLock::new(),
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    /// Parities of the measurement record that are fixed in every noiseless
    /// branch.
    pub fn detectors(&self) -> Result<&[Detector], NoiseError> {
        self.detectors
            .get_or_init(|| run_symbolic(&self.circuit, &self.init).map(|r| r.detectors()))
            .as_deref()
            .map_err(|e| NoiseError::Circuit(e.clone()))
    }

    fn check_mode(&self, mode: Mode) -> Result<(), NoiseError> {
        match mode {
            Mode::AcceptAll => Ok(()),
            Mode::Detect => self.detectors().map(|_| ()),
            Mode::Correct => match &self.decode {
                Some(d) if matches!(d.code.decoder, Decoder::Lookup(_)) => Ok(()),
                _ => Err(NoiseError::NoDecoder),
            },
        }
    }

    /// Draws the faults of one shot.
    pub fn sample(&self, nm: &NoiseModel, rng: &mut impl Rng) -> Vec<Fault> {
        let mut faults = Vec::new();
        for (kind, locs) in KINDS.iter().zip(&self.by_kind) {
            let p = nm.rate(*kind);
            if p <= 0.0 || locs.is_empty() {
                continue;
            }
            if p >= 1.0 {
                for &location in locs {
                    faults.push(Fault {
                        location,
                        pauli: draw_pauli(*kind, rng),
                    });
                }
                continue;
            }
            // Geometric gaps between faulty locations.
            let log_q = (-p).ln_1p();
            let mut i = 0usize;
            loop {
                let u: f64 = rng.random();
                let gap = ((-u).ln_1p() / log_q).floor();
                if gap >= (locs.len() - i) as f64 {
                    break;
                }
                i += gap as usize;
                faults.push(Fault {
                    location: locs[i],
                    pauli: draw_pauli(*kind, rng),
                });
                i += 1;
                if i >= locs.len() {
                    break;
                }
            }
        }
        faults
    }

    /// One shot with freshly sampled faults.
    pub fn run_shot(&self, nm: &NoiseModel, mode: Mode, rng: &mut impl Rng) -> Result<ShotResult, NoiseError> {
        self.check_mode(mode)?;
        let mut faults = self.sample(nm, rng);
        Ok(self.simulate(mode, &mut faults))
    }

    /// One shot with exactly the given faults.
    pub fn run_with_faults(&self, mode: Mode, faults: &[Fault]) -> Result<ShotResult, NoiseError> {
        self.check_mode(mode)?;
        for f in faults {
            let loc = self
                .locations
                .get(f.location)
                .ok_or(NoiseError::BadLocation(f.location))?;
            let ok = match loc.kind {
                FaultKind::Measurement => true,
                FaultKind::TwoQubit => (1..16).contains(&f.pauli),
                _ => (1..4).contains(&f.pauli),
            };
            if !ok {
                return Err(NoiseError::BadPauli {
                    location: f.location,
                    code: f.pauli,
                });
            }
        }
        let mut faults = faults.to_vec();
        Ok(self.simulate(mode, &mut faults))
    }

    /// Every single fault: each location with each of its Paulis.
    pub fn single_faults(&self) -> impl Iterator<Item = Fault> + '_ {
        self.locations.iter().enumerate().flat_map(|(location, loc)| {
            let codes = if loc.kind == FaultKind::Measurement {
                0..1
            } else {
                1..loc.n_paulis() + 1
            };
            codes.map(move |pauli| Fault { location, pauli })
        })
    }

    fn simulate(&self, mode: Mode, faults: &mut [Fault]) -> ShotResult {
        faults.sort_by_key(|f| (self.loc_step[f.location], f.location));
        let n = self.circuit.n_qubits();
        let mut frame = PauliFrame::new(n);
        let start = faults.first().map_or(self.steps.len(), |f| self.loc_step[f.location]);
        frame.flipped_measurements = vec![false; self.meas_before[start]];
        let mut accepted = true;
        let mut next = 0;
        for s in start..self.steps.len() {
            match &self.steps[s] {
                Step::Op(op) => propagate(&mut frame, op),
                Step::Decode => {
                    if mode == Mode::Correct {
                        accepted &= self.correct_blocks(&mut frame);
                    }
                }
            }
            while next < faults.len() && self.loc_step[faults[next].location] == s {
                let f = faults[next];
                next += 1;
                let loc = &self.locations[f.location];
                match (loc.kind, &self.steps[s]) {
                    (FaultKind::Measurement, Step::Op(Op::Measure { index, .. })) => {
                        frame.flipped_measurements[*index] ^= true;
                    }
                    _ => {
                        frame.inject_single(loc.qubits.0, letter(f.pauli));
                        if let Some(b) = loc.qubits.1 {
                            frame.inject_single(b, letter(f.pauli >> 2));
                        }
                    }
                }
            }
        }
        if mode == Mode::Detect {
            let detectors = self.detectors().expect("checked by check_mode");
            accepted = detectors.iter().all(|d| !frame.parity(&d.measurements));
        }
        let correct = accepted && self.target.contains(&restrict(&frame.error, &self.outputs));
        ShotResult {
            accepted,
            correct,
            outcome_bits: frame.flipped_measurements,
        }
    }

    /// Decodes each measured block and folds the correction into the
    /// recorded flips. Returns false if a block cannot be decoded.
    fn correct_blocks(&self, frame: &mut PauliFrame) -> bool {
        let d = self.decode.as_ref().expect("correction mode has blocks");
        let n_checks = d.code.stabilizers.len();
        for block in &d.blocks {
            let checks = match block.basis {
                MeasBasis::X => &d.x_checks,
                MeasBasis::Z => &d.z_checks,
            };
            let mut syndrome = BitVec::zeros(n_checks);
            for (i, support) in checks {
                let parity = support
                    .iter()
                    .fold(false, |acc, &j| acc ^ frame.flipped_measurements[block.measurements[j]]);
                syndrome.set(*i, parity);
            }
            if syndrome.is_zero() {
                continue;
            }
            match d.code.decode(&syndrome) {
                Ok(Decoding::Correction(p)) => {
                    let flips = match block.basis {
                        MeasBasis::X => &p.z,
                        MeasBasis::Z => &p.x,
                    };
                    for j in flips.iter_ones() {
                        frame.flipped_measurements[block.measurements[j]] ^= true;
                    }
                }
                _ => return false,
            }
        }
        true
    }

    /// Fidelity over `shots` shots, shot `i` drawing from stream `i` of `seed`.
    pub fn estimate(&self, nm: &NoiseModel, mode: Mode, shots: u64, seed: u64) -> Result<FidelityEstimate, NoiseError> {
        nm.validate()?;
        self.check_mode(mode)?;
        if shots == 0 {
            return Err(NoiseError::NoShots);
        }
        let (accepted, correct) = (0..shots)
            .into_par_iter()
            .map(|shot| {
                let mut rng = shot_rng(seed, shot);
                let mut faults = self.sample(nm, &mut rng);
                if faults.is_empty() {
                    return (1, 1);
                }
                let r = self.simulate(mode, &mut faults);
                (r.accepted as u64, r.correct as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        Ok(FidelityEstimate::from_counts(shots, accepted, correct, seed))
    }
}

fn restrict(p: &PauliString, wires: &[usize]) -> PauliString {
    crate::circuits::restrict_bits(&p.x, &p.z, wires)
}
