//! Bit-packed vectors and matrices over GF(2).

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> BitVec {
        BitVec::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_parity(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).fold(0, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn leading_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(wi, w)| wi * 64 + w.trailing_zeros() as usize)
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

/// Rank of `rows.len() / words` packed rows of `words` words each,
/// destroying the rows. Allocation-free, for hot loops.
pub fn rank_of_words(rows: &mut [u64], words: usize) -> usize {
    let count = rows.len().checked_div(words).unwrap_or(0);
    let mut rank = 0;
    for w in 0..words {
        for bit in 0..64 {
            let mask = 1u64 << bit;
            let Some(p) = (rank..count).find(|&r| rows[r * words + w] & mask != 0) else { continue };
            for k in 0..words {
                rows.swap(rank * words + k, p * words + k);
            }
            for r in 0..count {
                if r != rank && rows[r * words + w] & mask != 0 {
                    for k in w..words {
                        let x = rows[rank * words + k];
                        rows[r * words + k] ^= x;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Row-major GF(2) matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn new(cols: usize) -> Gf2Matrix {
        Gf2Matrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Gf2Matrix {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged GF(2) matrix");
        Gf2Matrix { cols, rows }
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        self.rows.iter().filter(|r| basis.insert(r)).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows.len() == self.cols && (0..self.cols).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Row space membership.
    pub fn spans(&self, v: &BitVec) -> bool {
        let mut basis = EchelonBasis::new(self.cols);
        for r in &self.rows {
            basis.insert(r);
        }
        basis.contains(v)
    }

    /// 0/1 grid, one row per line.
    pub fn to_grid(&self) -> String {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|c| if r.get(c) { "1" } else { "0" }).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_nested(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| (0..self.cols).map(|c| r.get(c) as u8).collect()).collect()
    }
}

/// Incrementally maintained reduced basis, keyed by leading bit.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    pivots: Vec<Option<BitVec>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(len: usize) -> EchelonBasis {
        EchelonBasis { len, pivots: vec![None; len], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        while let Some(p) = v.leading_one() {
            match &self.pivots[p] {
                Some(row) => v.xor_assign(row),
                None => break,
            }
        }
        v
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        match r.leading_one() {
            None => false,
            Some(p) => {
                self.pivots[p] = Some(r);
                self.rank += 1;
                true
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}
