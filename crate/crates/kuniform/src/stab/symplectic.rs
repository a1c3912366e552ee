use super::bits::{rank_in_place, word_count, BitVec};
use super::pauli::PauliString;
use super::StabError;

/// Generators as rows of `(x | z)` bits over `n` qubits (signs discarded).
///
/// Columns `0..n` hold the X part and `n..2n` the Z part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySymplecticMatrix {
    n: usize,
    rows: Vec<BitVec>,
}

impl BinarySymplecticMatrix {
    /// # Panics
    /// If any row does not have `2n` bits.
    pub fn from_rows(n: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == 2 * n), "row length must be 2n");
        BinarySymplecticMatrix { n, rows }
    }

    pub fn from_paulis(gens: &[PauliString]) -> Result<Self, StabError> {
        let n = gens.first().map_or(0, |g| g.n());
        if let Some(g) = gens.iter().find(|g| g.n() != n) {
            return Err(StabError::SizeMismatch {
                expected: n,
                got: g.n(),
            });
        }
        Ok(BinarySymplecticMatrix {
            n,
            rows: gens.iter().map(|g| g.symplectic()).collect(),
        })
    }

    /// Builds from a dense 0/1 table with `2n` columns.
    pub fn from_dense(n: usize, table: &[Vec<u8>]) -> Self {
        let rows = table
            .iter()
            .map(|r| {
                assert_eq!(r.len(), 2 * n);
                BitVec::from_ones(2 * n, r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, _)| i))
            })
            .collect();
        BinarySymplecticMatrix { n, rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..2 * self.n).map(|c| r.get(c) as u8).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        gf2_rank(self)
    }
}

/// Rank over GF(2).
pub fn gf2_rank(m: &BinarySymplecticMatrix) -> usize {
    let w = word_count(2 * m.n);
    let mut buf = Vec::with_capacity(w * m.rows.len());
    for r in &m.rows {
        buf.extend_from_slice(r.words());
    }
    rank_in_place(&mut buf, w)
}

/// Keeps the X and Z columns of `subset`, in that order.
pub fn restrict_columns(m: &BinarySymplecticMatrix, subset: &[usize]) -> Result<BinarySymplecticMatrix, StabError> {
    let mut seen = BitVec::zeros(m.n);
    for &q in subset {
        if q >= m.n {
            return Err(StabError::QubitOutOfRange { index: q, n: m.n });
        }
        if seen.get(q) {
            return Err(StabError::DuplicateQubit(q));
        }
        seen.set(q, true);
    }
    let k = subset.len();
    let rows = m
        .rows
        .iter()
        .map(|r| {
            let mut v = BitVec::zeros(2 * k);
            for (i, &q) in subset.iter().enumerate() {
                v.set(i, r.get(q));
                v.set(k + i, r.get(m.n + q));
            }
            v
        })
        .collect();
    Ok(BinarySymplecticMatrix { n: k, rows })
}

/// Whether `p` (sign ignored) lies in the group generated by `gens`.
pub fn pauli_in_group(p: &PauliString, gens: &[PauliString]) -> Result<bool, StabError> {
    if let Some(g) = gens.iter().find(|g| g.n() != p.n()) {
        return Err(StabError::SizeMismatch {
            expected: p.n(),
            got: g.n(),
        });
    }
    Ok(StabilizerGroup::new(p.n(), gens.iter()).contains(p))
}

/// Row-reduced basis of a Pauli group's `(x | z)` span for fast membership.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n: usize,
    w: usize,
    /// Reduced rows back to back, each `w` words.
    basis: Vec<u64>,
    pivots: Vec<usize>,
}

impl StabilizerGroup {
    pub fn new<'a>(n: usize, gens: impl IntoIterator<Item = &'a PauliString>) -> Self {
        let w = word_count(2 * n);
        let mut g = StabilizerGroup {
            n,
            w,
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        for p in gens {
            g.insert(&p.symplectic());
        }
        g
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (b, &piv) in self.pivots.iter().enumerate() {
            if (v[piv >> 6] >> (piv & 63)) & 1 == 1 {
                let row = &self.basis[b * self.w..(b + 1) * self.w];
                for (a, r) in v.iter_mut().zip(row) {
                    *a ^= *r;
                }
            }
        }
    }

    fn insert(&mut self, v: &BitVec) {
        let mut v = v.words().to_vec();
        self.reduce(&mut v);
        let Some(piv) = v
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
        else {
            return;
        };
        // Clear the new pivot from existing rows to keep the basis reduced.
        for b in 0..self.pivots.len() {
            let row = &mut self.basis[b * self.w..(b + 1) * self.w];
            if (row[piv >> 6] >> (piv & 63)) & 1 == 1 {
                for (r, a) in row.iter_mut().zip(&v) {
                    *r ^= *a;
                }
            }
        }
        self.basis.extend_from_slice(&v);
        self.pivots.push(piv);
    }

    /// Membership of the `(x | z)` vector of `p`.
    pub fn contains(&self, p: &PauliString) -> bool {
        let mut v = p.symplectic().words().to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }

    /// Membership of a Pauli given by raw bit vectors.
    pub fn contains_bits(&self, x: &BitVec, z: &BitVec) -> bool {
        let n = self.n;
        let mut v = BitVec::zeros(2 * n);
        for q in x.iter_ones() {
            v.set(q, true);
        }
        for q in z.iter_ones() {
            v.set(n + q, true);
        }
        let mut w = v.words().to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}
