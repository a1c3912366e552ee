//! Exact, Δ-approximate and α-separated k-uniformity of stabilizer states.
//!
//! For a subset `A` of `k` qubits, `I_A` is the GF(2) rank of the stabilizer
//! matrix restricted to the X and Z columns of `A`. The marginal on `A` is
//! maximally mixed iff `I_A = 2k`; in general its trace distance from the
//! maximally mixed state is `2 − 2^{1−r}` with `r = 2k − I_A`.
//!
//! Scans run in parallel over contiguous blocks of the lexicographic subset
//! order and are reduced in block order, so reports (including the witness)
//! do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stab::bits::{rank_in_place, word_count};
use crate::stab::{gf2_rank, restrict_columns, BinarySymplecticMatrix, StabError, StabilizerTableau};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniformityError {
    #[error("subset size k = {k} exceeds qubit count {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("subset size must be at least 1")]
    KZero,
    #[error("alpha must be at least 1")]
    AlphaZero,
    #[error(transparent)]
    Stab(#[from] StabError),
}

/// Summary of a k-uniformity scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub k: usize,
    pub alpha: usize,
    pub min_ia: usize,
    pub r: usize,
    pub delta: f64,
    /// First subset attaining `min_ia`, 0-based.
    pub witness: Vec<usize>,
    pub subsets_scanned: u64,
}

impl UniformityReport {
    pub fn is_exact(&self) -> bool {
        self.r == 0
    }

    /// Entanglement entropy (in bits) of the witness marginal.
    pub fn witness_entropy(&self) -> f64 {
        self.min_ia as f64 - self.k as f64
    }

    pub fn witness_one_based(&self) -> Vec<usize> {
        self.witness.iter().map(|q| q + 1).collect()
    }
}

/// Trace distance `2 − 2^{1−r}` of a rank-deficit-`r` marginal.
pub fn delta_from_r(r: usize) -> f64 {
    2.0 - 2f64.powi(1 - r as i32)
}

/// Smallest `r` whose Δ does not exceed `delta` (up to rounding).
pub fn r_for_delta(delta: f64) -> usize {
    (0..=128).find(|&r| delta_from_r(r + 1) > delta + 1e-12).unwrap_or(128)
}

/// The k-subsets of `{0..n}` with consecutive gaps of at least `alpha`,
/// in lexicographic order.
///
/// Subsets are in bijection with plain k-subsets of `{0..m}`,
/// `m = n − (k−1)(α−1)`, via `a_j = b_j + j(α−1)`; this is what makes
/// ranking and unranking cheap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    pub n: usize,
    pub k: usize,
    pub alpha: usize,
}

impl SubsetFamily {
    fn compressed(&self) -> usize {
        (self.n + self.alpha - 1).saturating_sub((self.k) * (self.alpha - 1))
    }

    pub fn len(&self) -> u64 {
        if self.n + self.alpha - 1 < self.k * (self.alpha - 1) + self.k {
            return 0;
        }
        binomial(self.compressed() as u64, self.k as u64)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn expand(&self, b: &[usize], out: &mut [usize]) {
        for (j, (&bj, o)) in b.iter().zip(out.iter_mut()).enumerate() {
            *o = bj + j * (self.alpha - 1);
        }
    }

    /// Subset with the given lexicographic rank.
    pub fn unrank(&self, mut idx: u64) -> Vec<usize> {
        let m = self.compressed();
        let mut b = Vec::with_capacity(self.k);
        let mut next = 0usize;
        for j in 0..self.k {
            let left = (self.k - j - 1) as u64;
            let mut v = next;
            loop {
                let c = binomial((m - v - 1) as u64, left);
                if idx < c {
                    break;
                }
                idx -= c;
                v += 1;
            }
            b.push(v);
            next = v + 1;
        }
        let mut out = vec![0; self.k];
        self.expand(&b, &mut out);
        out
    }

    /// Iterator over `count` subsets starting at rank `start`.
    pub fn iter_from(&self, start: u64, count: u64) -> SubsetIter {
        let m = self.compressed();
        let b = if start < self.len() {
            let mut s = self.unrank(start);
            for (j, v) in s.iter_mut().enumerate() {
                *v -= j * (self.alpha - 1);
            }
            s
        } else {
            Vec::new()
        };
        SubsetIter {
            family: *self,
            m,
            b,
            remaining: count.min(self.len().saturating_sub(start)),
            out: vec![0; self.k],
        }
    }

    pub fn iter(&self) -> SubsetIter {
        self.iter_from(0, self.len())
    }
}

/// Lending-style iterator; [`SubsetIter::next_subset`] avoids allocation.
pub struct SubsetIter {
    family: SubsetFamily,
    m: usize,
    b: Vec<usize>,
    remaining: u64,
    out: Vec<usize>,
}

impl SubsetIter {
    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        self.family.expand(&self.b, &mut self.out);
        self.remaining -= 1;
        if self.remaining > 0 {
            let k = self.b.len();
            let mut j = k;
            while j > 0 {
                j -= 1;
                if self.b[j] < self.m - (k - j) {
                    self.b[j] += 1;
                    for i in j + 1..k {
                        self.b[i] = self.b[i - 1] + 1;
                    }
                    break;
                }
            }
        }
        Some(&self.out)
    }
}

impl Iterator for SubsetIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_subset().map(|s| s.to_vec())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// The α-separated k-subsets of `n` qubits.
pub fn subsets_alpha(n: usize, k: usize, alpha: usize) -> Result<SubsetFamily, UniformityError> {
    if k == 0 {
        return Err(UniformityError::KZero);
    }
    if k > n {
        return Err(UniformityError::KTooLarge { k, n });
    }
    if alpha == 0 {
        return Err(UniformityError::AlphaZero);
    }
    Ok(SubsetFamily { n, k, alpha })
}

/// `I_A` for one subset.
pub fn independent_count(t: &StabilizerTableau, subset: &[usize]) -> Result<usize, UniformityError> {
    let m = t.symplectic_matrix();
    Ok(gf2_rank(&restrict_columns(&m, subset)?))
}

/// Column-major view of a generator matrix for fast restricted ranks.
///
/// Restricted rank is computed on the transpose: the `2k` selected columns,
/// each a bit vector over the generator rows.
pub struct ColumnScanner {
    n: usize,
    w: usize,
    /// `cols[q]` and `cols[n + q]` are the X and Z columns of qubit `q`.
    cols: Vec<u64>,
}

impl ColumnScanner {
    pub fn new(m: &BinarySymplecticMatrix) -> Self {
        let n = m.n_qubits();
        let w = word_count(m.n_rows()).max(1);
        let mut cols = vec![0u64; 2 * n * w];
        for (r, row) in m.rows().iter().enumerate() {
            for c in row.iter_ones() {
                cols[c * w + (r >> 6)] |= 1 << (r & 63);
            }
        }
        ColumnScanner { n, w, cols }
    }

    pub fn from_tableau(t: &StabilizerTableau) -> Self {
        ColumnScanner::new(&t.symplectic_matrix())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Restricted rank, or any value `≥ stop_at` once that bound is reached.
    pub fn rank_bounded(&self, subset: &[usize], stop_at: usize, buf: &mut Vec<u64>) -> usize {
        let w = self.w;
        if w == 1 {
            // Incremental insertion into a reduced basis, one column at a time.
            let mut basis = [0u64; 128];
            let mut rank = 0;
            let cols = subset
                .iter()
                .map(|&q| self.cols[q])
                .chain(subset.iter().map(|&q| self.cols[self.n + q]));
            for mut v in cols {
                for &p in &basis[..rank] {
                    let low = p & p.wrapping_neg();
                    if v & low != 0 {
                        v ^= p;
                    }
                }
                if v != 0 {
                    let low = v & v.wrapping_neg();
                    for p in basis[..rank].iter_mut() {
                        if *p & low != 0 {
                            *p ^= v;
                        }
                    }
                    basis[rank] = v;
                    rank += 1;
                    if rank >= stop_at {
                        return rank;
                    }
                }
            }
            rank
        } else {
            buf.clear();
            for &q in subset {
                buf.extend_from_slice(&self.cols[q * w..(q + 1) * w]);
            }
            for &q in subset {
                buf.extend_from_slice(&self.cols[(self.n + q) * w..(self.n + q + 1) * w]);
            }
            rank_in_place(buf, w)
        }
    }

    pub fn rank(&self, subset: &[usize]) -> usize {
        let mut buf = Vec::new();
        self.rank_bounded(subset, usize::MAX, &mut buf)
    }
}

const CHUNKS: u64 = 512;

fn chunk_bounds(total: u64) -> Vec<(u64, u64)> {
    let chunks = CHUNKS.min(total).max(1);
    let base = total / chunks;
    let extra = total % chunks;
    let mut out = Vec::with_capacity(chunks as usize);
    let mut start = 0;
    for c in 0..chunks {
        let len = base + u64::from(c < extra);
        out.push((start, len));
        start += len;
    }
    out
}

fn scan_min(scanner: &ColumnScanner, family: SubsetFamily) -> (usize, Vec<usize>, u64) {
    let total = family.len();
    let k = family.k;
    let per_chunk: Vec<(usize, Vec<usize>)> = chunk_bounds(total)
        .into_par_iter()
        .map(|(start, len)| {
            let mut it = family.iter_from(start, len);
            let mut best = usize::MAX;
            let mut witness = Vec::new();
            let mut buf = Vec::new();
            while let Some(s) = it.next_subset() {
                let r = scanner.rank_bounded(s, best, &mut buf);
                if r < best {
                    best = r;
                    witness = s.to_vec();
                }
            }
            (best, witness)
        })
        .collect();
    let mut best = usize::MAX;
    let mut witness = Vec::new();
    for (b, w) in per_chunk {
        if b < best {
            best = b;
            witness = w;
        }
    }
    if best == usize::MAX {
        best = 2 * k;
    }
    (best, witness, total)
}

/// Scans every subset in the α-separated family and reports the worst one.
pub fn verify(t: &StabilizerTableau, k: usize, alpha: usize) -> Result<UniformityReport, UniformityError> {
    verify_matrix(&t.symplectic_matrix(), k, alpha)
}

/// [`verify`] on a bare generator matrix.
pub fn verify_matrix(m: &BinarySymplecticMatrix, k: usize, alpha: usize) -> Result<UniformityReport, UniformityError> {
    let family = subsets_alpha(m.n_qubits(), k, alpha)?;
    let scanner = ColumnScanner::new(m);
    let (min_ia, witness, scanned) = scan_min(&scanner, family);
    let r = 2 * k - min_ia.min(2 * k);
    Ok(UniformityReport {
        k,
        alpha,
        min_ia,
        r,
        delta: delta_from_r(r),
        witness,
        subsets_scanned: scanned,
    })
}

/// Counts of exactly uniform (`r = 0`) and deficient (`r > 0`) k-subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaCounts {
    pub exact: u64,
    pub approximate: u64,
}

/// The ratio of deficient to exactly uniform subsets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum KappaRatio {
    Ratio(f64),
    /// No subset is exactly uniform, so the ratio is unbounded.
    NoUniformSubsets,
}

impl KappaRatio {
    pub fn value(&self) -> Option<f64> {
        match *self {
            KappaRatio::Ratio(v) => Some(v),
            KappaRatio::NoUniformSubsets => None,
        }
    }
}

impl KappaCounts {
    pub fn ratio(&self) -> KappaRatio {
        if self.exact == 0 {
            KappaRatio::NoUniformSubsets
        } else {
            KappaRatio::Ratio(self.approximate as f64 / self.exact as f64)
        }
    }
}

pub fn kappa_counts(t: &StabilizerTableau, k: usize) -> Result<KappaCounts, UniformityError> {
    let family = subsets_alpha(t.n(), k, 1)?;
    let scanner = ColumnScanner::from_tableau(t);
    let exact: u64 = chunk_bounds(family.len())
        .into_par_iter()
        .map(|(start, len)| {
            let mut it = family.iter_from(start, len);
            let mut buf = Vec::new();
            let mut c = 0u64;
            while let Some(s) = it.next_subset() {
                if scanner.rank_bounded(s, usize::MAX, &mut buf) == 2 * k {
                    c += 1;
                }
            }
            c
        })
        .sum();
    Ok(KappaCounts {
        exact,
        approximate: family.len() - exact,
    })
}

pub fn kappa_ratio(t: &StabilizerTableau, k: usize) -> Result<KappaRatio, UniformityError> {
    Ok(kappa_counts(t, k)?.ratio())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_family_examples() {
        let f = subsets_alpha(10, 4, 3).unwrap();
        let all: Vec<Vec<usize>> = f.iter().collect();
        assert!(all.contains(&vec![0, 3, 6, 9]));
        assert_eq!(subsets_alpha(4, 2, 1).unwrap().iter().count(), 6);
        let two: Vec<Vec<usize>> = subsets_alpha(4, 2, 2).unwrap().iter().collect();
        assert_eq!(two, vec![vec![0, 2], vec![0, 3], vec![1, 3]]);
    }

    #[test]
    fn unrank_matches_iteration() {
        for (n, k, a) in [(9, 3, 1), (10, 3, 2), (12, 4, 3), (5, 5, 1), (7, 1, 4)] {
            let f = SubsetFamily { n, k, alpha: a };
            for (i, s) in f.iter().enumerate() {
                assert_eq!(f.unrank(i as u64), s);
            }
        }
    }

    #[test]
    fn empty_family_when_gaps_do_not_fit() {
        let f = SubsetFamily { n: 5, k: 3, alpha: 3 };
        assert_eq!(f.len(), 0);
        assert_eq!(f.iter().count(), 0);
    }

    #[test]
    fn errors() {
        assert_eq!(subsets_alpha(3, 4, 1), Err(UniformityError::KTooLarge { k: 4, n: 3 }));
        assert_eq!(subsets_alpha(3, 1, 0), Err(UniformityError::AlphaZero));
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_from_r(0), 0.0);
        assert_eq!(delta_from_r(1), 1.0);
        assert_eq!(delta_from_r(2), 1.5);
        assert_eq!(r_for_delta(0.0), 0);
        assert_eq!(r_for_delta(1.0), 1);
        assert_eq!(r_for_delta(1.2), 1);
    }
}
