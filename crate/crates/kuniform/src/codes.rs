//! Small stabilizer codes: the five-qubit code, the Steane code, rotated
//! surface codes and the [4,2,2] color code.
//!
//! Logical representatives follow the conventions fixed by the printed
//! Bell-bridge circuits, so that the bridges in [`crate::circuits`] produce
//! exactly these logical–physical pairings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::stab::{BitVec, Clifford, PauliString, StabError, StabilizerGroup, StabilizerTableau};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("unsupported code {0:?}")]
    Unsupported(String),
    #[error("gate {gate} is not transversal for {code}")]
    NotTransversal { gate: String, code: String },
    #[error("gate {gate} needs {needed} block indices, got {got}")]
    BlockCount { gate: String, needed: usize, got: usize },
    #[error("code {0} has no decoder")]
    NoDecoder(String),
    #[error("code {0} only detects errors")]
    DetectionOnly(String),
    #[error("syndrome has {got} bits, expected {expected}")]
    SyndromeLength { expected: usize, got: usize },
    #[error(transparent)]
    Stab(#[from] StabError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeId {
    FiveQubit,
    Steane713,
    /// Rotated surface code of linear size `L`.
    Surface(usize),
    Color422,
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeId::FiveQubit => f.write_str("five_qubit"),
            CodeId::Steane713 => f.write_str("steane713"),
            CodeId::Surface(l) => write!(f, "surface:{l}"),
            CodeId::Color422 => f.write_str("color422"),
        }
    }
}

impl FromStr for CodeId {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "five_qubit" => Ok(CodeId::FiveQubit),
            "steane713" => Ok(CodeId::Steane713),
            "color422" => Ok(CodeId::Color422),
            _ => {
                if let Some(l) = s.strip_prefix("surface:") {
                    let l: usize = l.parse().map_err(|_| CodeError::Unsupported(s.into()))?;
                    if (2..=5).contains(&l) {
                        return Ok(CodeId::Surface(l));
                    }
                }
                Err(CodeError::Unsupported(s.into()))
            }
        }
    }
}

/// A logical gate that may appear in a transversal table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicalGate {
    X(usize),
    Z(usize),
    /// Hadamard on every logical qubit of the block.
    H,
    /// In-block controlled-Z between two logical qubits.
    Cz(usize, usize),
    /// Block-to-block CNOT acting on every logical pair `(i, i)`.
    Cnot,
}

impl LogicalGate {
    pub fn blocks(&self) -> usize {
        if matches!(self, LogicalGate::Cnot) {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicalGate::X(i) => write!(f, "X{i}"),
            LogicalGate::Z(i) => write!(f, "Z{i}"),
            LogicalGate::H => f.write_str("H"),
            LogicalGate::Cz(a, b) => write!(f, "CZ{a}{b}"),
            LogicalGate::Cnot => f.write_str("CNOT"),
        }
    }
}

/// Initial logical basis of every logical qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Zero,
    Plus,
}

impl FromStr for Basis {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" | "0" => Ok(Basis::Zero),
            "plus" | "+" => Ok(Basis::Plus),
            _ => Err(CodeError::Unsupported(format!("basis {s}"))),
        }
    }
}

/// Minimum-weight corrections for a CSS code, one table per error type.
///
/// `x_table` maps the Z-check part of the syndrome to an X correction and
/// `z_table` maps the X-check part to a Z correction.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    x_checks: Vec<usize>,
    z_checks: Vec<usize>,
    x_table: HashMap<BitVec, BitVec>,
    z_table: HashMap<BitVec, BitVec>,
}

#[derive(Clone, Debug)]
pub enum Decoder {
    None,
    DetectOnly,
    Lookup(SyndromeTable),
}

/// Outcome of decoding a syndrome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoding {
    Correction(PauliString),
    Reject,
}

#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub id: CodeId,
    pub n: usize,
    pub kappa: usize,
    pub d: usize,
    pub stabilizers: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
    /// Physical gates on block-local indices; two-block gates use `0..n` for
    /// the first block and `n..2n` for the second.
    pub transversal_table: BTreeMap<LogicalGate, Vec<Clifford>>,
    pub decoder: Decoder,
}

fn paulis(rows: &[&str]) -> Vec<PauliString> {
    rows.iter().map(|r| r.parse().expect("valid Pauli literal")).collect()
}

fn on_support(p: &PauliString, f: impl Fn(usize) -> Clifford) -> Vec<Clifford> {
    p.support().into_iter().map(f).collect()
}

/// Rotated surface code on an `L × L` grid, qubit `(i, j)` at `i·L + j`.
fn surface_checks(l: usize) -> (Vec<PauliString>, Vec<PauliString>) {
    let n = l * l;
    let q = |i: usize, j: usize| i * l + j;
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for i in 0..l - 1 {
        for j in 0..l - 1 {
            let sup = [q(i, j), q(i, j + 1), q(i + 1, j), q(i + 1, j + 1)];
            if (i + j) % 2 == 0 {
                xs.push(PauliString::on(n, &sup, 'X'));
            } else {
                zs.push(PauliString::on(n, &sup, 'Z'));
            }
        }
    }
    for j in 0..l - 1 {
        if j % 2 == 1 {
            xs.push(PauliString::on(n, &[q(0, j), q(0, j + 1)], 'X'));
        }
        if (l - 2 + j) % 2 == 1 {
            xs.push(PauliString::on(n, &[q(l - 1, j), q(l - 1, j + 1)], 'X'));
        }
    }
    for i in 0..l - 1 {
        if i % 2 == 0 {
            zs.push(PauliString::on(n, &[q(i, 0), q(i + 1, 0)], 'Z'));
        }
        if (i + l - 2).is_multiple_of(2) {
            zs.push(PauliString::on(n, &[q(i, l - 1), q(i + 1, l - 1)], 'Z'));
        }
    }
    (xs, zs)
}

fn transversal_cnot(n: usize) -> Vec<Clifford> {
    (0..n).map(|q| Clifford::Cnot(q, n + q)).collect()
}

/// Builds one of the supported codes.
pub fn build_code(id: CodeId) -> Result<CodeSpec, CodeError> {
    let mut table = BTreeMap::new();
    let spec = match id {
        CodeId::FiveQubit => {
            let lx = paulis(&["XXXXX"]);
            let lz = paulis(&["ZZZZZ"]);
            table.insert(LogicalGate::X(0), on_support(&lx[0], Clifford::X));
            table.insert(LogicalGate::Z(0), on_support(&lz[0], Clifford::Z));
            CodeSpec {
                id,
                n: 5,
                kappa: 1,
                d: 3,
                stabilizers: paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
                logical_x: lx,
                logical_z: lz,
                transversal_table: table,
                decoder: Decoder::None,
            }
        }
        CodeId::Steane713 => {
            let lx = paulis(&["IIXIXXI"]);
            let lz = paulis(&["IIZIZZI"]);
            table.insert(LogicalGate::X(0), on_support(&lx[0], Clifford::X));
            table.insert(LogicalGate::Z(0), on_support(&lz[0], Clifford::Z));
            table.insert(LogicalGate::H, (0..7).map(Clifford::H).collect());
            table.insert(LogicalGate::Cnot, transversal_cnot(7));
            CodeSpec {
                id,
                n: 7,
                kappa: 1,
                d: 3,
                stabilizers: paulis(&["XIXIXIX", "IXXIIXX", "IIIXXXX", "ZIZIZIZ", "IZZIIZZ", "IIIZZZZ"]),
                logical_x: lx,
                logical_z: lz,
                transversal_table: table,
                decoder: Decoder::None,
            }
        }
        CodeId::Surface(l) => {
            if !(2..=5).contains(&l) {
                return Err(CodeError::Unsupported(id.to_string()));
            }
            let n = l * l;
            let (xs, zs) = surface_checks(l);
            let left: Vec<usize> = (0..l).map(|i| i * l).collect();
            let bottom: Vec<usize> = (0..l).map(|j| (l - 1) * l + j).collect();
            let lx = vec![PauliString::on(n, &left, 'X')];
            let lz = vec![PauliString::on(n, &bottom, 'Z')];
            table.insert(LogicalGate::X(0), on_support(&lx[0], Clifford::X));
            table.insert(LogicalGate::Z(0), on_support(&lz[0], Clifford::Z));
            table.insert(LogicalGate::Cnot, transversal_cnot(n));
            let stabilizers: Vec<PauliString> = xs.iter().chain(&zs).cloned().collect();
            let mut c = CodeSpec {
                id,
                n,
                kappa: 1,
                d: l,
                stabilizers,
                logical_x: lx,
                logical_z: lz,
                transversal_table: table,
                decoder: Decoder::None,
            };
            c.decoder = Decoder::Lookup(SyndromeTable::build(&c));
            c
        }
        CodeId::Color422 => {
            let lx = paulis(&["IXIX", "IIXX"]);
            let lz = paulis(&["IIZZ", "IZIZ"]);
            for i in 0..2 {
                table.insert(LogicalGate::X(i), on_support(&lx[i], Clifford::X));
                table.insert(LogicalGate::Z(i), on_support(&lz[i], Clifford::Z));
            }
            table.insert(
                LogicalGate::Cz(0, 1),
                vec![Clifford::S(0), Clifford::Sdg(1), Clifford::Sdg(2), Clifford::S(3)],
            );
            table.insert(LogicalGate::Cnot, transversal_cnot(4));
            CodeSpec {
                id,
                n: 4,
                kappa: 2,
                d: 2,
                stabilizers: paulis(&["XXXX", "ZZZZ"]),
                logical_x: lx,
                logical_z: lz,
                transversal_table: table,
                decoder: Decoder::DetectOnly,
            }
        }
    };
    Ok(spec)
}

impl CodeSpec {
    /// Syndrome bit `i` is 1 iff `e` anticommutes with stabilizer `i`.
    pub fn syndrome(&self, e: &PauliString) -> BitVec {
        BitVec::from_bools(&self.stabilizers.iter().map(|s| !s.commutes(e)).collect::<Vec<_>>())
    }

    pub fn is_css(&self) -> bool {
        self.stabilizers.iter().all(|s| s.x.is_zero() || s.z.is_zero())
    }

    pub fn stabilizer_group(&self) -> StabilizerGroup {
        StabilizerGroup::new(self.n, self.stabilizers.iter())
    }

    /// Physical image of a logical Pauli on this block's `kappa` qubits.
    ///
    /// `Y` maps to `i·X̄Z̄`, so signs are exact.
    pub fn logical_to_physical(&self, logical: &PauliString) -> PauliString {
        assert_eq!(logical.n(), self.kappa);
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.kappa {
            let part = match logical.get(i) {
                'I' => continue,
                'X' => self.logical_x[i].clone(),
                'Z' => self.logical_z[i].clone(),
                _ => {
                    let (imag, mut p) = self.logical_x[i].mul_with_phase(&self.logical_z[i]);
                    debug_assert!(imag);
                    p.sign = !p.sign;
                    p
                }
            };
            acc = acc.mul(&part);
        }
        acc.sign ^= logical.sign;
        acc
    }

    /// Encodes a logical stabilizer state of `blocks · kappa` qubits into
    /// `blocks` code blocks laid out consecutively.
    pub fn encode_state(&self, logical: &StabilizerTableau) -> Result<StabilizerTableau, CodeError> {
        let kappa = self.kappa;
        if logical.n() % kappa != 0 {
            return Err(CodeError::Stab(StabError::SizeMismatch {
                expected: kappa * (logical.n() / kappa + 1),
                got: logical.n(),
            }));
        }
        let blocks = logical.n() / kappa;
        let n = blocks * self.n;
        let mut gens = Vec::with_capacity(n);
        for b in 0..blocks {
            for s in &self.stabilizers {
                gens.push(s.embed(n, b * self.n));
            }
        }
        for g in logical.stabilizers() {
            let mut acc = PauliString::identity(n);
            for b in 0..blocks {
                let mut part = g.restrict(&(b * kappa..(b + 1) * kappa).collect::<Vec<_>>());
                part.sign = false;
                let phys = self.logical_to_physical(&part).embed(n, b * self.n);
                acc = acc.mul(&phys);
            }
            acc.sign ^= g.sign;
            gens.push(acc);
        }
        Ok(StabilizerTableau::from_stabilizers(&gens)?)
    }

    /// Maps a local gate list onto the given blocks.
    fn place(&self, gates: &[Clifford], blocks: &[usize]) -> Vec<Clifford> {
        let n = self.n;
        gates
            .iter()
            .map(|g| g.map_qubits(|q| blocks[q / n] * n + q % n))
            .collect()
    }

    /// Physical gates realising `gate` on the listed blocks.
    pub fn transversal(&self, gate: &LogicalGate, blocks: &[usize]) -> Result<Vec<Clifford>, CodeError> {
        let local = self
            .transversal_table
            .get(gate)
            .ok_or_else(|| CodeError::NotTransversal {
                gate: gate.to_string(),
                code: self.id.to_string(),
            })?;
        if blocks.len() != gate.blocks() {
            return Err(CodeError::BlockCount {
                gate: gate.to_string(),
                needed: gate.blocks(),
                got: blocks.len(),
            });
        }
        Ok(self.place(local, blocks))
    }

    /// Decodes a full syndrome (one bit per stabilizer).
    pub fn decode(&self, syndrome: &BitVec) -> Result<Decoding, CodeError> {
        if syndrome.len() != self.stabilizers.len() {
            return Err(CodeError::SyndromeLength {
                expected: self.stabilizers.len(),
                got: syndrome.len(),
            });
        }
        match &self.decoder {
            Decoder::None => Err(CodeError::NoDecoder(self.id.to_string())),
            Decoder::DetectOnly => Ok(if syndrome.is_zero() {
                Decoding::Correction(PauliString::identity(self.n))
            } else {
                Decoding::Reject
            }),
            Decoder::Lookup(t) => Ok(t.lookup(syndrome)),
        }
    }

    /// Like [`CodeSpec::decode`] but only accepts codes that can correct.
    pub fn correct(&self, syndrome: &BitVec) -> Result<PauliString, CodeError> {
        match &self.decoder {
            Decoder::DetectOnly => Err(CodeError::DetectionOnly(self.id.to_string())),
            _ => match self.decode(syndrome)? {
                Decoding::Correction(p) => Ok(p),
                Decoding::Reject => Err(CodeError::DetectionOnly(self.id.to_string())),
            },
        }
    }

    /// Whether `p` acts as a non-trivial logical operator.
    pub fn is_nontrivial_logical(&self, p: &PauliString, group: &StabilizerGroup) -> bool {
        self.stabilizers.iter().all(|s| s.commutes(p)) && !group.contains(p)
    }

    /// Smallest weight of a non-trivial logical operator, searching up to
    /// `max_weight`. CSS codes are searched per error type.
    pub fn min_logical_weight(&self, max_weight: usize) -> Option<usize> {
        let group = self.stabilizer_group();
        let letters: &[char] = if self.is_css() { &['X', 'Z'] } else { &['X', 'Y', 'Z'] };
        for w in 1..=max_weight.min(self.n) {
            let mut found = false;
            for_each_combination(self.n, w, |sup| {
                if found {
                    return;
                }
                if self.is_css() {
                    for &c in letters {
                        let p = PauliString::on(self.n, sup, c);
                        if self.is_nontrivial_logical(&p, &group) {
                            found = true;
                        }
                    }
                } else {
                    let total = 3usize.pow(w as u32);
                    for code in 0..total {
                        let mut p = PauliString::identity(self.n);
                        let mut c = code;
                        for &q in sup {
                            p.set(q, letters[c % 3]);
                            c /= 3;
                        }
                        if self.is_nontrivial_logical(&p, &group) {
                            found = true;
                            break;
                        }
                    }
                }
            });
            if found {
                return Some(w);
            }
        }
        None
    }

    /// Encoded `|0̄…0̄⟩` or `|+̄…+̄⟩` on `blocks` blocks.
    pub fn encoded_state(&self, basis: Basis, blocks: usize) -> Result<StabilizerTableau, CodeError> {
        let logical_n = blocks * self.kappa;
        let mut t = StabilizerTableau::new(logical_n);
        if basis == Basis::Plus {
            for q in 0..logical_n {
                t.apply(&Clifford::H(q))?;
            }
        }
        self.encode_state(&t)
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if c[j] < n - (k - j) {
                c[j] += 1;
                for i in j + 1..k {
                    c[i] = c[i - 1] + 1;
                }
                break;
            }
        }
    }
}

impl SyndromeTable {
    /// Enumerates errors of one type in weight order (lexicographic within a
    /// weight) until every reachable syndrome has a correction.
    fn build(c: &CodeSpec) -> SyndromeTable {
        let x_checks: Vec<usize> = (0..c.stabilizers.len())
            .filter(|&i| !c.stabilizers[i].x.is_zero())
            .collect();
        let z_checks: Vec<usize> = (0..c.stabilizers.len())
            .filter(|&i| !c.stabilizers[i].z.is_zero())
            .collect();
        let fill = |checks: &[usize], letter: char| {
            let mut table = HashMap::new();
            let target = 1usize << checks.len();
            for w in 0..=c.n {
                for_each_combination(c.n, w, |sup| {
                    if table.len() == target {
                        return;
                    }
                    let e = PauliString::on(c.n, sup, letter);
                    let s = BitVec::from_bools(
                        &checks
                            .iter()
                            .map(|&i| !c.stabilizers[i].commutes(&e))
                            .collect::<Vec<_>>(),
                    );
                    table
                        .entry(s)
                        .or_insert_with(|| BitVec::from_ones(c.n, sup.iter().copied()));
                });
                if table.len() == target {
                    break;
                }
            }
            table
        };
        // Z checks see X errors and vice versa.
        let x_table = fill(&z_checks, 'X');
        let z_table = fill(&x_checks, 'Z');
        SyndromeTable {
            x_checks,
            z_checks,
            x_table,
            z_table,
        }
    }

    fn lookup(&self, syndrome: &BitVec) -> Decoding {
        let part = |checks: &[usize]| BitVec::from_bools(&checks.iter().map(|&i| syndrome.get(i)).collect::<Vec<_>>());
        let x = self.x_table.get(&part(&self.z_checks));
        let z = self.z_table.get(&part(&self.x_checks));
        match (x, z) {
            (Some(x), Some(z)) => Decoding::Correction(PauliString {
                x: x.clone(),
                z: z.clone(),
                sign: false,
            }),
            _ => Decoding::Reject,
        }
    }

    pub fn len(&self) -> usize {
        self.x_table.len() + self.z_table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
