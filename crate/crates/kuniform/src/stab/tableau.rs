use std::fmt;

use super::bits::BitVec;
use super::gates::Clifford;
use super::pauli::{product_phase, PauliString};
use super::symplectic::BinarySymplecticMatrix;
use super::StabError;

/// The sign of a stabilizer row.
///
/// `bool` is the ordinary concrete sign. [`AffineSign`] keeps the sign as a
/// GF(2)-affine function of random measurement outcomes, which lets one
/// simulation cover every outcome branch at once.
pub trait Sign: Clone + fmt::Debug + Send + Sync {
    fn plus() -> Self;
    fn flip(&mut self);
    fn add(&mut self, other: &Self);

    #[inline]
    fn flip_if(&mut self, c: bool) {
        if c {
            self.flip();
        }
    }
}

impl Sign for bool {
    #[inline]
    fn plus() -> Self {
        false
    }
    #[inline]
    fn flip(&mut self) {
        *self = !*self;
    }
    #[inline]
    fn add(&mut self, other: &Self) {
        *self ^= *other;
    }
}

/// `constant ⊕ ⨁_{v ∈ vars} m_v` over outcome variables `m_v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineSign {
    pub constant: bool,
    pub vars: BitVec,
}

impl AffineSign {
    pub fn constant(c: bool) -> Self {
        AffineSign {
            constant: c,
            vars: BitVec::zeros(0),
        }
    }

    /// The bare variable `m_index`.
    pub fn var(index: usize) -> Self {
        AffineSign {
            constant: false,
            vars: BitVec::from_ones(index + 1, [index]),
        }
    }

    /// `Some(c)` when the value does not depend on any outcome.
    pub fn as_constant(&self) -> Option<bool> {
        self.vars.is_zero().then_some(self.constant)
    }

    pub fn variables(&self) -> Vec<usize> {
        self.vars.iter_ones().collect()
    }

    /// Evaluates under a full assignment of the outcome variables.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.vars.iter_ones().fold(self.constant, |acc, v| acc ^ assignment[v])
    }
}

impl fmt::Debug for AffineSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant as u8)?;
        for v in self.vars.iter_ones() {
            write!(f, "+m{v}")?;
        }
        Ok(())
    }
}

impl Sign for AffineSign {
    fn plus() -> Self {
        AffineSign::constant(false)
    }
    fn flip(&mut self) {
        self.constant = !self.constant;
    }
    fn add(&mut self, other: &Self) {
        self.constant ^= other.constant;
        if other.vars.len() > self.vars.len() {
            self.vars.resize(other.vars.len());
        }
        let words = self.vars.words_mut();
        for (a, b) in words.iter_mut().zip(other.vars.words()) {
            *a ^= *b;
        }
    }
}

/// Result of measuring a Pauli observable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement<S> {
    /// Outcome bit: `false` for eigenvalue +1.
    pub outcome: S,
    pub deterministic: bool,
}

/// A pure `n`-qubit stabilizer state with destabilizers.
///
/// Row `i < n` is destabilizer `i`; row `n + i` is stabilizer `i`. Only
/// stabilizer rows carry a meaningful sign.
#[derive(Clone)]
pub struct StabilizerTableau<S: Sign = bool> {
    n: usize,
    x: Vec<BitVec>,
    z: Vec<BitVec>,
    signs: Vec<S>,
}

impl<S: Sign> StabilizerTableau<S> {
    /// The all-zero state `|0…0⟩`.
    pub fn new(n: usize) -> Self {
        let mut x = Vec::with_capacity(2 * n);
        let mut z = Vec::with_capacity(2 * n);
        for i in 0..n {
            x.push(BitVec::from_ones(n, [i]));
            z.push(BitVec::zeros(n));
        }
        for i in 0..n {
            x.push(BitVec::zeros(n));
            z.push(BitVec::from_ones(n, [i]));
        }
        StabilizerTableau {
            n,
            x,
            z,
            signs: vec![S::plus(); n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Stabilizer generator `i` without its sign.
    pub fn stabilizer_bits(&self, i: usize) -> (&BitVec, &BitVec) {
        (&self.x[self.n + i], &self.z[self.n + i])
    }

    pub fn stabilizer_sign(&self, i: usize) -> &S {
        &self.signs[i]
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        PauliString {
            x: self.x[i].clone(),
            z: self.z[i].clone(),
            sign: false,
        }
    }

    /// Binary symplectic matrix of the stabilizer generators.
    pub fn symplectic_matrix(&self) -> BinarySymplecticMatrix {
        let rows = (0..self.n)
            .map(|i| {
                let (x, z) = self.stabilizer_bits(i);
                let mut v = BitVec::zeros(2 * self.n);
                for q in x.iter_ones() {
                    v.set(q, true);
                }
                for q in z.iter_ones() {
                    v.set(self.n + q, true);
                }
                v
            })
            .collect();
        BinarySymplecticMatrix::from_rows(self.n, rows)
    }

    pub fn apply(&mut self, gate: &Clifford) -> Result<(), StabError> {
        gate.check(self.n)?;
        let n = self.n;
        for r in 0..2 * n {
            let flip = gate.conjugate_bits(&mut self.x[r], &mut self.z[r]);
            if r >= n {
                self.signs[r - n].flip_if(flip);
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Clifford>) -> Result<(), StabError> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Applies the Pauli `p` to the state when `when` evaluates to 1.
    ///
    /// Multiplies the sign of every stabilizer anticommuting with `p` by `when`.
    pub fn apply_pauli_if(&mut self, p: &PauliString, when: &S) -> Result<(), StabError> {
        self.check_len(p)?;
        for i in 0..self.n {
            if !self.row_commutes(self.n + i, p) {
                self.signs[i].add(when);
            }
        }
        Ok(())
    }

    /// Applies the Pauli `p` (phase ignored).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<(), StabError> {
        let mut one = S::plus();
        one.flip();
        self.apply_pauli_if(p, &one)
    }

    fn check_len(&self, p: &PauliString) -> Result<(), StabError> {
        if p.n() != self.n {
            return Err(StabError::SizeMismatch {
                expected: self.n,
                got: p.n(),
            });
        }
        Ok(())
    }

    #[inline]
    fn row_commutes(&self, r: usize, p: &PauliString) -> bool {
        self.x[r].dot(&p.z) == self.z[r].dot(&p.x)
    }

    /// Row `h` ← row `i` · row `h`, tracking the stabilizer sign when `h ≥ n`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let e = product_phase(
            self.x[i].words(),
            self.z[i].words(),
            self.x[h].words(),
            self.z[h].words(),
        );
        let (xi, zi) = (self.x[i].clone(), self.z[i].clone());
        self.x[h].xor_assign(&xi);
        self.z[h].xor_assign(&zi);
        if h >= self.n {
            debug_assert!(i >= self.n && e.is_multiple_of(2));
            let si = self.signs[i - self.n].clone();
            let sh = &mut self.signs[h - self.n];
            sh.add(&si);
            sh.flip_if(e == 2);
        }
    }

    /// Measures the observable `p` (including its sign).
    ///
    /// `random` is called once, only when the outcome is not determined by
    /// the state, and supplies the outcome bit.
    pub fn measure_pauli(&mut self, p: &PauliString, random: impl FnOnce() -> S) -> Result<Measurement<S>, StabError> {
        self.check_len(p)?;
        let n = self.n;
        let pivot = (0..n).find(|&i| !self.row_commutes(n + i, p));
        match pivot {
            Some(pv) => {
                let pr = n + pv;
                for r in 0..2 * n {
                    if r != pr && !self.row_commutes(r, p) {
                        self.rowsum(r, pr);
                    }
                }
                self.x[pv] = self.x[pr].clone();
                self.z[pv] = self.z[pr].clone();
                self.x[pr] = p.x.clone();
                self.z[pr] = p.z.clone();
                let outcome = random();
                let mut s = outcome.clone();
                s.flip_if(p.sign);
                self.signs[pv] = s;
                Ok(Measurement {
                    outcome,
                    deterministic: false,
                })
            }
            None => {
                let outcome = self.product_sign_for(p);
                Ok(Measurement {
                    outcome,
                    deterministic: true,
                })
            }
        }
    }

    /// Sign bit of `p` within the group, assuming `±p` is a stabilizer.
    fn product_sign_for(&self, p: &PauliString) -> S {
        let n = self.n;
        let mut ax = BitVec::zeros(n);
        let mut az = BitVec::zeros(n);
        let mut sign = S::plus();
        for i in 0..n {
            if !self.row_commutes(i, p) {
                let r = n + i;
                let e = product_phase(self.x[r].words(), self.z[r].words(), ax.words(), az.words());
                ax.xor_assign(&self.x[r]);
                az.xor_assign(&self.z[r]);
                sign.add(&self.signs[i]);
                sign.flip_if(e == 2);
            }
        }
        debug_assert!(ax == p.x && az == p.z);
        sign.flip_if(p.sign);
        sign
    }

    pub fn measure_z(&mut self, qubit: usize, random: impl FnOnce() -> S) -> Result<Measurement<S>, StabError> {
        if qubit >= self.n {
            return Err(StabError::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        self.measure_pauli(&PauliString::single(self.n, qubit, 'Z'), random)
    }

    pub fn measure_x(&mut self, qubit: usize, random: impl FnOnce() -> S) -> Result<Measurement<S>, StabError> {
        if qubit >= self.n {
            return Err(StabError::QubitOutOfRange {
                index: qubit,
                n: self.n,
            });
        }
        self.measure_pauli(&PauliString::single(self.n, qubit, 'X'), random)
    }

    /// `Some(bit)` if `(-1)^bit · p` is in the stabilizer group (signs of `p`
    /// included), `None` if `p` anticommutes with some generator.
    pub fn expectation(&self, p: &PauliString) -> Result<Option<S>, StabError> {
        self.check_len(p)?;
        if (0..self.n).any(|i| !self.row_commutes(self.n + i, p)) {
            return Ok(None);
        }
        Ok(Some(self.product_sign_for(p)))
    }

    /// Stabilizer `j0` ← stabilizer `j` · stabilizer `j0`, with the matching
    /// destabilizer update that keeps the tableau symplectic.
    fn combine_stabilizers(&mut self, j0: usize, j: usize) {
        let n = self.n;
        self.rowsum(n + j0, n + j);
        self.rowsum(j, j0);
    }

    /// Tableau whose stabilizer group is generated by `gens`, with signs.
    pub fn from_stabilizers(gens: &[PauliString]) -> Result<Self, StabError> {
        let n = gens.first().map_or(0, |g| g.n());
        if gens.len() != n {
            return Err(StabError::NotAStabilizerState(format!(
                "{} generators for {} qubits",
                gens.len(),
                n
            )));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.n() != n {
                return Err(StabError::SizeMismatch {
                    expected: n,
                    got: g.n(),
                });
            }
            for h in &gens[i + 1..] {
                if !g.commutes(h) {
                    return Err(StabError::NotAStabilizerState(format!("{g} and {h} anticommute")));
                }
            }
        }
        let mut t = StabilizerTableau::<S>::new(n);
        let mut imposed = vec![false; n];
        for g in gens {
            if let Some(pv) = (0..n).find(|&i| !t.row_commutes(n + i, g)) {
                t.measure_pauli(g, S::plus)?;
                imposed[pv] = true;
                continue;
            }
            let support: Vec<usize> = (0..n).filter(|&i| !t.row_commutes(i, g)).collect();
            let Some(&j0) = support.iter().find(|&&j| !imposed[j]) else {
                return Err(StabError::NotAStabilizerState(format!(
                    "{g} is dependent on earlier generators"
                )));
            };
            for &j in &support {
                if j != j0 {
                    t.combine_stabilizers(j0, j);
                }
            }
            debug_assert!(t.x[n + j0] == g.x && t.z[n + j0] == g.z);
            let mut s = S::plus();
            s.flip_if(g.sign);
            t.signs[j0] = s;
            imposed[j0] = true;
        }
        Ok(t)
    }

    /// Tensor product `self ⊗ other`, with `other` on the higher qubits.
    pub fn tensor(&self, other: &StabilizerTableau<S>) -> StabilizerTableau<S> {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let mut out = StabilizerTableau::<S>::new(n);
        let place = |src: &BitVec, off: usize| {
            let mut v = BitVec::zeros(n);
            for q in src.iter_ones() {
                v.set(off + q, true);
            }
            v
        };
        for i in 0..a {
            out.x[i] = place(&self.x[i], 0);
            out.z[i] = place(&self.z[i], 0);
            out.x[n + i] = place(&self.x[a + i], 0);
            out.z[n + i] = place(&self.z[a + i], 0);
            out.signs[i] = self.signs[i].clone();
        }
        for i in 0..b {
            out.x[a + i] = place(&other.x[i], a);
            out.z[a + i] = place(&other.z[i], a);
            out.x[n + a + i] = place(&other.x[b + i], a);
            out.z[n + a + i] = place(&other.z[b + i], a);
            out.signs[a + i] = other.signs[i].clone();
        }
        out
    }

    /// Checks the commutation relations between all rows.
    pub fn is_consistent(&self) -> bool {
        let n = self.n;
        let row = |r: usize| PauliString {
            x: self.x[r].clone(),
            z: self.z[r].clone(),
            sign: false,
        };
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let anti = !row(i).commutes(&row(j));
                let expect = j == i + n;
                if anti != expect {
                    return false;
                }
            }
        }
        true
    }
}

impl StabilizerTableau<bool> {
    /// Stabilizer generators with signs.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n)
            .map(|i| PauliString {
                x: self.x[self.n + i].clone(),
                z: self.z[self.n + i].clone(),
                sign: self.signs[i],
            })
            .collect()
    }

    /// True if `p` (with its sign) stabilizes the state.
    pub fn is_stabilized_by(&self, p: &PauliString) -> Result<bool, StabError> {
        Ok(self.expectation(p)? == Some(false))
    }

    /// Same stabilizer group with identical signs.
    pub fn same_state(&self, other: &StabilizerTableau<bool>) -> bool {
        self.n == other.n
            && other
                .stabilizers()
                .iter()
                .all(|g| self.is_stabilized_by(g).unwrap_or(false))
    }
}

impl StabilizerTableau<AffineSign> {
    /// Concrete tableau obtained by fixing every outcome variable.
    pub fn evaluate(&self, assignment: &[bool]) -> StabilizerTableau<bool> {
        StabilizerTableau {
            n: self.n,
            x: self.x.clone(),
            z: self.z.clone(),
            signs: self.signs.iter().map(|s| s.eval(assignment)).collect(),
        }
    }
}

impl StabilizerTableau<bool> {
    /// Lifts a concrete tableau to symbolic signs.
    pub fn to_affine(&self) -> StabilizerTableau<AffineSign> {
        StabilizerTableau {
            n: self.n,
            x: self.x.clone(),
            z: self.z.clone(),
            signs: self.signs.iter().map(|&s| AffineSign::constant(s)).collect(),
        }
    }
}

impl<S: Sign> fmt::Debug for StabilizerTableau<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let p = PauliString {
                x: self.x[self.n + i].clone(),
                z: self.z[self.n + i].clone(),
                sign: false,
            };
            writeln!(f, "{:?} {}", self.signs[i], &p.to_string()[1..])?;
        }
        Ok(())
    }
}
