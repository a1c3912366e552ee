//! Fixed-length bit vectors packed into `u64` words.

use std::fmt;

/// Number of 64-bit words needed to hold `len` bits.
#[inline]
pub fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// A fixed-length vector over GF(2).
///
/// Bits beyond `len` in the last word are always zero, so word-level
/// comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector with ones at the given positions.
    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Grows the vector to `len` bits, padding with zeros.
    pub fn resize(&mut self, len: usize) {
        if len > self.len {
            self.len = len;
            self.words.resize(word_count(len), 0);
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank over GF(2) of a set of equal-length word vectors, destroying them.
///
/// Each row is a slice of `w` words; the buffer holds the rows back to back.
pub fn rank_in_place(buf: &mut [u64], w: usize) -> usize {
    if w == 0 {
        return 0;
    }
    let rows = buf.len() / w;
    let mut rank = 0;
    for col in 0..w * 64 {
        if rank == rows {
            break;
        }
        let (cw, mask) = (col >> 6, 1u64 << (col & 63));
        let Some(p) = (rank..rows).find(|&r| buf[r * w + cw] & mask != 0) else {
            continue;
        };
        if p != rank {
            for k in 0..w {
                buf.swap(p * w + k, rank * w + k);
            }
        }
        for r in rank + 1..rows {
            if buf[r * w + cw] & mask != 0 {
                for k in cw..w {
                    let v = buf[rank * w + k];
                    buf[r * w + k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over GF(2) of rows that each fit in a single word.
#[inline]
pub fn rank_words(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let mut v = rows[i];
        for &p in &rows[..rank] {
            let low = p & p.wrapping_neg();
            if v & low != 0 {
                v ^= p;
            }
        }
        if v != 0 {
            // Keep the basis reduced on its lowest bits.
            let low = v & v.wrapping_neg();
            for p in rows[..rank].iter_mut() {
                if *p & low != 0 {
                    *p ^= v;
                }
            }
            rows[rank] = v;
            rank += 1;
        }
    }
    rank
}
