//! Exhaustive, priority-ordered search for brickwork circuits that prepare
//! (approximately) k-uniform states, sweeping the qubit count.
//!
//! Candidate layers are built per qubit count: an optional in-block
//! sublayer followed by an optional block-pair sublayer. Sequences of
//! layers are streamed with translation-invariant layers first and boundary
//! modifications introduced one at a time.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::circuits::{min_depth_lightcone, pack_layers, Architecture, Circuit, CircuitError, Gate};
use crate::codes::{build_code, Basis, CodeError, CodeId, CodeSpec, LogicalGate};
use crate::stab::{Clifford, StabilizerTableau};
use crate::uniformity::{delta_from_r, r_for_delta, verify, UniformityError, UniformityReport};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Uniformity(#[from] UniformityError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Which end of the chain a boundary modification touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    First,
    Last,
}

/// Blocks an in-block sublayer acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cells {
    All,
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InBlockLayer {
    pub gate: LogicalGate,
    pub cells: Cells,
    /// Gate dropped at one end of the chain.
    pub omit: Option<End>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairMod {
    Delete(End),
    Flip(End),
}

/// Transversal CNOTs on block pairs `(a, a+1)` with `a ≡ parity (mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairLayer {
    pub parity: usize,
    /// Control on the lower-indexed block of each pair.
    pub control_low: bool,
    pub modification: Option<PairMod>,
}

/// One brickwork layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LayerCandidate {
    pub in_block: Option<InBlockLayer>,
    pub pair: Option<PairLayer>,
    /// The in-block gate has no transversal form and may only open the
    /// circuit, where it folds into the encoded initial state.
    pub first_only: bool,
    /// Gates on `N` logical qubits, in-block sublayer first.
    pub gates: Vec<Vec<Clifford>>,
}

impl LayerCandidate {
    pub fn modifications(&self) -> usize {
        self.in_block.is_some_and(|l| l.omit.is_some()) as usize
            + self.pair.is_some_and(|p| p.modification.is_some()) as usize
    }

    pub fn is_invariant(&self) -> bool {
        self.modifications() == 0
    }
}

fn end_name(e: End) -> &'static str {
    match e {
        End::First => "first",
        End::Last => "last",
    }
}

impl fmt::Display for LayerCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(l) = &self.in_block {
            let cells = match l.cells {
                Cells::All => "all",
                Cells::Even => "even",
                Cells::Odd => "odd",
            };
            let mut s = format!("{}@{cells}", l.gate);
            if let Some(e) = l.omit {
                s += &format!(" omit-{}", end_name(e));
            }
            parts.push(s);
        }
        if let Some(p) = &self.pair {
            let mut s = format!(
                "CNOT@p{} {}",
                p.parity,
                if p.control_low { "low>high" } else { "high>low" }
            );
            match p.modification {
                Some(PairMod::Delete(e)) => s += &format!(" delete-{}", end_name(e)),
                Some(PairMod::Flip(e)) => s += &format!(" flip-{}", end_name(e)),
                None => {}
            }
            parts.push(s);
        }
        f.write_str(&parts.join(" + "))
    }
}

fn in_block_gates(g: LogicalGate, kappa: usize, blocks: &[usize]) -> Vec<Clifford> {
    blocks
        .iter()
        .map(|&b| match g {
            LogicalGate::Cz(a, c) => Clifford::Cz(b * kappa + a, b * kappa + c),
            _ => Clifford::H(b * kappa),
        })
        .collect()
}

fn pair_gates(p: &PairLayer, kappa: usize, n_blocks: usize) -> Vec<Clifford> {
    let mut pairs: Vec<(usize, bool)> = (p.parity..n_blocks.saturating_sub(1))
        .step_by(2)
        .map(|a| (a, p.control_low))
        .collect();
    match p.modification {
        Some(PairMod::Delete(End::First)) => {
            pairs.drain(..pairs.len().min(1));
        }
        Some(PairMod::Delete(End::Last)) => {
            pairs.pop();
        }
        Some(PairMod::Flip(e)) => {
            let i = if e == End::First {
                Some(0)
            } else {
                pairs.len().checked_sub(1)
            };
            if let Some(pr) = i.and_then(|i| pairs.get_mut(i)) {
                pr.1 = !pr.1;
            }
        }
        None => {}
    }
    let mut out = Vec::new();
    for (a, low) in pairs {
        let (c, t) = if low { (a, a + 1) } else { (a + 1, a) };
        for s in 0..kappa {
            out.push(Clifford::Cnot(c * kappa + s, t * kappa + s));
        }
    }
    out
}

/// All layer candidates for `n` logical qubits in blocks of `c.kappa`,
/// translation-invariant ones first. Candidates that act trivially or
/// repeat an earlier candidate's gates are dropped.
pub fn enumerate_layers(c: &CodeSpec, n: usize) -> Vec<LayerCandidate> {
    let kappa = c.kappa;
    let n_blocks = n / kappa;
    let mut in_gates: Vec<(LogicalGate, bool)> = c
        .transversal_table
        .keys()
        .filter(|g| matches!(g, LogicalGate::Cz(..)) || (**g == LogicalGate::H && kappa == 1))
        .map(|g| (*g, false))
        .collect();
    if kappa == 1 && !c.transversal_table.contains_key(&LogicalGate::H) {
        in_gates.push((LogicalGate::H, true));
    }
    let mut in_opts: Vec<Option<(InBlockLayer, bool)>> = vec![None];
    for omit in [None, Some(End::First), Some(End::Last)] {
        for &(gate, first_only) in &in_gates {
            for cells in [Cells::All, Cells::Even, Cells::Odd] {
                in_opts.push(Some((InBlockLayer { gate, cells, omit }, first_only)));
            }
        }
    }
    let mut pair_opts: Vec<Option<PairLayer>> = vec![None];
    let mods = [
        None,
        Some(PairMod::Delete(End::First)),
        Some(PairMod::Delete(End::Last)),
        Some(PairMod::Flip(End::First)),
        Some(PairMod::Flip(End::Last)),
    ];
    if n_blocks >= 2 && c.transversal_table.contains_key(&LogicalGate::Cnot) {
        for modification in mods {
            for parity in 0..2 {
                for control_low in [true, false] {
                    pair_opts.push(Some(PairLayer {
                        parity,
                        control_low,
                        modification,
                    }));
                }
            }
        }
    }
    let mut all = Vec::new();
    for ib in &in_opts {
        for pl in &pair_opts {
            let mut gates = Vec::new();
            if let Some((l, _)) = ib {
                let mut blocks: Vec<usize> = (0..n_blocks)
                    .filter(|b| match l.cells {
                        Cells::All => true,
                        Cells::Even => b % 2 == 0,
                        Cells::Odd => b % 2 == 1,
                    })
                    .collect();
                match l.omit {
                    Some(End::First) if !blocks.is_empty() => {
                        blocks.remove(0);
                    }
                    Some(End::Last) => {
                        blocks.pop();
                    }
                    _ => {}
                }
                gates.push(in_block_gates(l.gate, kappa, &blocks));
            }
            if let Some(p) = pl {
                gates.push(pair_gates(p, kappa, n_blocks));
            }
            gates.retain(|g| !g.is_empty());
            if gates.is_empty() {
                continue;
            }
            all.push(LayerCandidate {
                in_block: ib.map(|(l, _)| l),
                pair: *pl,
                first_only: ib.is_some_and(|(_, f)| f),
                gates,
            });
        }
    }
    all.sort_by_key(|l| l.modifications());
    let mut seen = HashSet::new();
    all.retain(|l| seen.insert((l.gates.clone(), l.first_only)));
    all
}

/// Priority-ordered stream of layer sequences of a fixed depth.
///
/// Sequences with fewer modified layers come first; within a count the
/// order is lexicographic in layer indices.
pub struct CircuitStream<'a> {
    layers: &'a [LayerCandidate],
    depth: usize,
    limit: u64,
    emitted: u64,
    mods: usize,
    current: Option<Vec<usize>>,
}

/// Streams at most `budget + 1` sequences, indexed `0..=budget`.
pub fn enumerate_circuits(layers: &[LayerCandidate], depth: usize, budget: u64) -> CircuitStream<'_> {
    let mut s = CircuitStream {
        layers,
        depth,
        limit: budget.saturating_add(1),
        emitted: 0,
        mods: 0,
        current: None,
    };
    s.current = s.first_with(0);
    s
}

impl CircuitStream<'_> {
    fn allowed(&self, pos: usize, v: usize) -> bool {
        pos == 0 || !self.layers[v].first_only
    }

    fn is_mod(&self, v: usize) -> usize {
        self.layers[v].modifications().min(1)
    }

    /// Smallest value above `from` at `pos` keeping `need` modified layers
    /// attainable in the remaining positions.
    fn next_value(&self, pos: usize, from: Option<usize>, used: usize, need_total: usize) -> Option<usize> {
        let rest = self.depth - pos - 1;
        let start = from.map_or(0, |v| v + 1);
        (start..self.layers.len()).find(|&v| {
            if !self.allowed(pos, v) {
                return false;
            }
            let u = used + self.is_mod(v);
            u <= need_total
                && need_total - u <= rest
                && (need_total - u == 0 || self.later(false))
                && (need_total - u == rest || self.later(true))
        })
    }

    /// Whether an invariant (or modified) layer may sit past the first slot.
    fn later(&self, invariant: bool) -> bool {
        self.layers
            .iter()
            .any(|l| !l.first_only && l.is_invariant() == invariant)
    }

    fn complete(&self, prefix: &mut Vec<usize>, need_total: usize) -> bool {
        while prefix.len() < self.depth {
            let used: usize = prefix.iter().map(|&v| self.is_mod(v)).sum();
            match self.next_value(prefix.len(), None, used, need_total) {
                Some(v) => prefix.push(v),
                None => return false,
            }
        }
        true
    }

    fn first_with(&self, mods: usize) -> Option<Vec<usize>> {
        if self.depth == 0 || self.layers.is_empty() {
            return None;
        }
        let mut v = Vec::new();
        self.complete(&mut v, mods).then_some(v)
    }

    fn successor(&self, cur: &[usize]) -> Option<Vec<usize>> {
        for pos in (0..self.depth).rev() {
            let used: usize = cur[..pos].iter().map(|&v| self.is_mod(v)).sum();
            if let Some(v) = self.next_value(pos, Some(cur[pos]), used, self.mods) {
                let mut next = cur[..pos].to_vec();
                next.push(v);
                if self.complete(&mut next, self.mods) {
                    return Some(next);
                }
            }
        }
        None
    }
}

impl Iterator for CircuitStream<'_> {
    type Item = (u64, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.emitted >= self.limit {
            return None;
        }
        while self.current.is_none() {
            if self.mods >= self.depth {
                return None;
            }
            self.mods += 1;
            self.current = self.first_with(self.mods);
        }
        let cur = self.current.take().expect("current sequence");
        self.current = self.successor(&cur);
        let z = self.emitted;
        self.emitted += 1;
        Some((z, cur))
    }
}

fn default_budget() -> u64 {
    1_000_000
}

fn default_basis() -> String {
    "plus".into()
}

/// Search configuration, read from TOML.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub code: String,
    pub k: usize,
    #[serde(default)]
    pub delta: f64,
    /// Separation for the filter pass; `max(1, ⌊N/2k⌋)` when absent.
    #[serde(default)]
    pub alpha: Option<usize>,
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default)]
    pub n_start: Option<usize>,
    pub n_max: usize,
    /// Starting depth in layers; twice the light-cone time steps when absent.
    #[serde(default)]
    pub depth_start: Option<usize>,
    pub depth_max: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Search {
    pub code: CodeSpec,
    pub k: usize,
    pub delta: f64,
    pub alpha: Option<usize>,
    pub basis: Basis,
    pub n_start: usize,
    pub n_max: usize,
    pub depth_start: usize,
    pub depth_max: usize,
    pub budget: u64,
}

impl SearchConfig {
    pub fn parse(src: &str) -> Result<Self, SearchError> {
        toml::from_str(src).map_err(|e| SearchError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<Search, SearchError> {
        let bad = |m: String| Err(SearchError::Config(m));
        let code = build_code(self.code.parse::<CodeId>()?)?;
        let kappa = code.kappa;
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if delta_from_r(r_for_delta(self.delta)) != self.delta {
            return bad(format!("delta {} is not of the form 2 - 2^(1-r)", self.delta));
        }
        if self.alpha == Some(0) {
            return bad("alpha must be at least 1".into());
        }
        let smallest = (2 * self.k + 1).div_ceil(kappa) * kappa;
        let n_start = self.n_start.unwrap_or(smallest);
        if n_start <= 2 * self.k {
            return bad(format!("n_start {n_start} must exceed 2k = {}", 2 * self.k));
        }
        if !n_start.is_multiple_of(kappa) {
            return bad(format!("n_start {n_start} is not a multiple of the block size {kappa}"));
        }
        if self.n_max < n_start {
            return bad(format!("n_max {} is below n_start {n_start}", self.n_max));
        }
        let depth_start = self
            .depth_start
            .unwrap_or_else(|| (2 * min_depth_lightcone(self.k, Architecture::for_code(&code))).max(1));
        if depth_start == 0 || self.depth_max < depth_start {
            return bad(format!("depth range {depth_start}..={} is empty", self.depth_max));
        }
        Ok(Search {
            basis: self.basis.parse()?,
            code,
            k: self.k,
            delta: self.delta,
            alpha: self.alpha,
            n_start,
            n_max: self.n_max,
            depth_start,
            depth_max: self.depth_max,
            budget: self.budget,
        })
    }
}

/// A circuit that met the target.
#[derive(Clone, Debug)]
pub struct Hit {
    pub zeta: u64,
    pub layers: Vec<usize>,
    pub pattern: Vec<String>,
    pub circuit: Circuit,
    pub report: UniformityReport,
}

/// Outcome at one qubit count.
#[derive(Clone, Debug)]
pub struct NResult {
    pub n: usize,
    /// Depth of the last pass, where the hits were found if any.
    pub depth: usize,
    pub alpha: usize,
    /// `(depth, candidates visited)` for every pass at this `N`.
    pub passes: Vec<(usize, u64)>,
    /// Indices passing the separated filter in the last pass.
    pub filtered: Vec<u64>,
    pub hits: Vec<Hit>,
}

impl NResult {
    pub fn found(&self) -> bool {
        !self.hits.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub per_n: Vec<NResult>,
}

/// Circuit for a layer sequence, after the initial-state layer.
pub fn build_circuit(
    layers: &[LayerCandidate],
    seq: &[usize],
    n: usize,
    basis: Basis,
) -> Result<Circuit, CircuitError> {
    let mut out: Vec<Vec<Gate>> = Vec::new();
    if basis == Basis::Plus {
        out.push((0..n).map(|q| Gate::Clifford(Clifford::H(q))).collect());
    }
    for &i in seq {
        for sub in &layers[i].gates {
            out.extend(pack_layers(sub.iter().map(|g| Gate::Clifford(*g))));
        }
    }
    Circuit::from_layers(n, out)
}

const CHUNK: usize = 256;

impl Search {
    fn alpha_for(&self, n: usize) -> usize {
        self.alpha.unwrap_or((n / (2 * self.k)).max(1))
    }

    /// Every valid qubit count from `n_start` to `n_max`.
    pub fn sizes(&self) -> Vec<usize> {
        (self.n_start..=self.n_max).step_by(self.code.kappa).collect()
    }

    /// One pass over the stream at fixed `n` and depth.
    fn pass(
        &self,
        layers: &[LayerCandidate],
        n: usize,
        depth: usize,
        alpha: usize,
    ) -> Result<(u64, Vec<u64>, Vec<Hit>), SearchError> {
        let mut stream = enumerate_circuits(layers, depth, self.budget);
        let mut visited = 0;
        let mut filtered = Vec::new();
        let mut hits = Vec::new();
        loop {
            let chunk: Vec<(u64, Vec<usize>)> = stream.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            visited += chunk.len() as u64;
            type Checked = Result<Option<(Circuit, Option<UniformityReport>)>, SearchError>;
            let checked: Vec<Checked> = chunk
                .par_iter()
                .map(|(_, seq)| {
                    let c = build_circuit(layers, seq, n, self.basis)?;
                    let mut t = StabilizerTableau::new(n);
                    t.apply_all(&c.cliffords()?).map_err(CircuitError::from)?;
                    if verify(&t, self.k, alpha)?.delta > self.delta {
                        return Ok(None);
                    }
                    let full = verify(&t, self.k, 1)?;
                    Ok(Some((c, (full.delta <= self.delta).then_some(full))))
                })
                .collect();
            for ((zeta, seq), res) in chunk.into_iter().zip(checked) {
                if let Some((circuit, full)) = res? {
                    filtered.push(zeta);
                    if let Some(report) = full {
                        hits.push(Hit {
                            zeta,
                            pattern: seq.iter().map(|&i| layers[i].to_string()).collect(),
                            layers: seq,
                            circuit,
                            report,
                        });
                    }
                }
            }
        }
        Ok((visited, filtered, hits))
    }

    /// Runs the sweep. The depth carried into the next `N` is the depth at
    /// which the previous `N` succeeded.
    pub fn run(&self) -> Result<SearchResult, SearchError> {
        let mut per_n = Vec::new();
        let mut depth = self.depth_start;
        for n in self.sizes() {
            let layers = enumerate_layers(&self.code, n);
            let alpha = self.alpha_for(n);
            let mut passes = Vec::new();
            loop {
                let (visited, filtered, hits) = self.pass(&layers, n, depth, alpha)?;
                passes.push((depth, visited));
                if !hits.is_empty() || depth >= self.depth_max {
                    per_n.push(NResult {
                        n,
                        depth,
                        alpha,
                        passes,
                        filtered,
                        hits,
                    });
                    break;
                }
                depth += 1;
            }
            if !per_n.last().expect("pushed").found() {
                depth = self.depth_start;
            }
        }
        Ok(SearchResult { per_n })
    }
}

/// Runs the search described by a TOML config.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    cfg.validate()?.run()
}

pub const INDEX_HEADER: &str = "N,zeta,depth,delta";

impl SearchResult {
    /// Index rows; an `N` without hits gets one row with an empty index and
    /// `not_found`.
    pub fn index_csv(&self) -> String {
        let mut s = format!("{INDEX_HEADER}\n");
        for r in &self.per_n {
            if r.hits.is_empty() {
                s += &format!("{},,{},not_found\n", r.n, r.depth);
            }
            for h in &r.hits {
                s += &format!("{},{},{},{}\n", r.n, h.zeta, r.depth, h.report.delta);
            }
        }
        s
    }

    /// Layer patterns of the hits per `N`, and which patterns consecutive
    /// sizes share.
    pub fn pattern_report(&self) -> String {
        let sig = |h: &Hit| h.pattern.join(" | ");
        let mut s = String::new();
        for r in &self.per_n {
            s += &format!(
                "N = {} (depth {}, alpha {}): {} hits\n",
                r.n,
                r.depth,
                r.alpha,
                r.hits.len()
            );
            for h in &r.hits {
                s += &format!("  [{}] {}\n", h.zeta, sig(h));
            }
        }
        for w in self.per_n.windows(2) {
            let a: HashSet<String> = w[0].hits.iter().map(sig).collect();
            let b: HashSet<String> = w[1].hits.iter().map(sig).collect();
            let mut shared: Vec<&String> = a.intersection(&b).collect();
            let mut gone: Vec<&String> = a.difference(&b).collect();
            let mut new: Vec<&String> = b.difference(&a).collect();
            shared.sort();
            gone.sort();
            new.sort();
            s += &format!("\nN = {} -> {}: {} shared\n", w[0].n, w[1].n, shared.len());
            for p in shared {
                s += &format!("  = {p}\n");
            }
            for p in gone {
                s += &format!("  - {p}\n");
            }
            for p in new {
                s += &format!("  + {p}\n");
            }
        }
        s
    }

    /// Writes `index.csv`, `patterns.txt` and one `.qc` file per hit.
    pub fn write_dir(&self, dir: &Path) -> Result<(), SearchError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("index.csv"), self.index_csv())?;
        fs::write(dir.join("patterns.txt"), self.pattern_report())?;
        for r in &self.per_n {
            for h in &r.hits {
                fs::write(dir.join(format!("n{:03}_z{}.qc", r.n, h.zeta)), h.circuit.serialize())?;
            }
        }
        Ok(())
    }
}
