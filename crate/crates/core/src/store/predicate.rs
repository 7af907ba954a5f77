//! Column ranges of predicates.
//!
//! Columns are sorted by predicate, so each predicate owns one contiguous
//! run. `starts[p - 1]` is the first column of predicate `p` and
//! `starts[nP] = n`; selecting a predicate's start is a lookup. Going from a
//! column back to its predicate uses `samples[j]`, the predicate of column
//! `min(j * period, n - 1)`, to bound a binary search over `starts`.

use std::io::{Read, Write};
use std::ops::Range;

use crate::error::{check_range, Error, Result};
use crate::io::{read_len, read_u32, read_u64_vec, write_u32, write_u64, write_u64_slice, MAX_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateIndex {
    starts: Vec<u64>,
    period: usize,
    samples: Vec<u32>,
}

impl PredicateIndex {
    /// Builds from the predicate of every column, in column order.
    /// Predicates must be non-decreasing and within `1..=n_predicates`.
    pub fn build<I>(column_predicates: I, n_predicates: u32, period: usize) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        if period == 0 {
            return Err(Error::Config("sampling period must be positive".into()));
        }
        let mut counts = vec![0u64; n_predicates as usize + 1];
        let mut last = 0u32;
        for p in column_predicates {
            if p == 0 || p > n_predicates {
                return Err(Error::OutOfRange {
                    what: "predicate id",
                    value: p as u64,
                    limit: n_predicates as u64 + 1,
                });
            }
            if p < last {
                return Err(Error::Config("column predicates are not sorted".into()));
            }
            last = p;
            counts[p as usize] += 1;
        }
        let mut starts = Vec::with_capacity(n_predicates as usize + 1);
        let mut acc = 0u64;
        for &c in &counts[1..] {
            starts.push(acc);
            acc += c;
        }
        starts.push(acc);
        Self::from_starts(starts, period)
    }

    fn from_starts(starts: Vec<u64>, period: usize) -> Result<Self> {
        let n = *starts.last().expect("at least the sentinel");
        let mut idx = PredicateIndex {
            starts,
            period,
            samples: Vec::new(),
        };
        if n > 0 {
            let count = n as usize / period + 1;
            idx.samples = (0..count)
                .map(|j| idx.search(((j * period) as u64).min(n - 1), 1, idx.n_predicates()))
                .collect();
        }
        Ok(idx)
    }

    /// Number of columns.
    pub fn len(&self) -> u64 {
        *self.starts.last().expect("sentinel")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_predicates(&self) -> u32 {
        (self.starts.len() - 1) as u32
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn starts(&self) -> &[u64] {
        &self.starts
    }

    pub fn samples(&self) -> &[u32] {
        &self.samples
    }

    /// First column of predicate `p`.
    pub fn select(&self, p: u32) -> Result<u64> {
        self.check_predicate(p)?;
        Ok(self.starts[p as usize - 1])
    }

    /// Columns of predicate `p`; empty for unused ids.
    pub fn columns(&self, p: u32) -> Result<Range<u64>> {
        self.check_predicate(p)?;
        Ok(self.starts[p as usize - 1]..self.starts[p as usize])
    }

    fn check_predicate(&self, p: u32) -> Result<()> {
        if p == 0 || p > self.n_predicates() {
            return Err(Error::OutOfRange {
                what: "predicate id",
                value: p as u64,
                limit: self.n_predicates() as u64 + 1,
            });
        }
        Ok(())
    }

    /// Predicate owning column `i`.
    pub fn rank(&self, i: u64) -> Result<u32> {
        check_range("column", i, self.len())?;
        Ok(self.predicate_of(i))
    }

    #[inline]
    pub(crate) fn predicate_of(&self, i: u64) -> u32 {
        let j = i as usize / self.period;
        let lo = self.samples[j];
        let hi = self.samples.get(j + 1).copied().unwrap_or(self.n_predicates());
        self.search(i, lo, hi)
    }

    /// Largest `p` in `[lo, hi]` with `starts[p - 1] <= i`.
    fn search(&self, i: u64, lo: u32, hi: u32) -> u32 {
        let window = &self.starts[lo as usize - 1..hi as usize];
        lo - 1 + window.partition_point(|&s| s <= i) as u32
    }

    pub fn size_in_bytes(&self) -> usize {
        self.starts.len() * 8 + self.samples.len() * 4
    }

    /// Column starts as u64, then the samples as u32, each preceded by its
    /// count. The period is stored in the file header.
    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u64(w, self.starts.len() as u64)?;
        n += write_u64_slice(w, &self.starts)?;
        n += write_u64(w, self.samples.len() as u64)?;
        for &s in &self.samples {
            n += write_u32(w, s)?;
        }
        Ok(n)
    }

    pub fn deserialize_from<R: Read>(r: &mut R, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::Format("sampling period must be positive".into()));
        }
        let count = read_len(r, MAX_LEN, "predicate starts")?;
        if count == 0 || count > u32::MAX as usize {
            return Err(Error::Format("predicate index needs a sentinel".into()));
        }
        let starts = read_u64_vec(r, count)?;
        if starts[0] != 0 || starts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("predicate starts are not monotone".into()));
        }
        let n_samples = read_len(r, MAX_LEN, "predicate samples")?;
        let mut samples = Vec::with_capacity(n_samples.min(1 << 24));
        for _ in 0..n_samples {
            samples.push(read_u32(r)?);
        }
        let idx = Self::from_starts(starts, period)?;
        if idx.samples != samples {
            return Err(Error::Format("predicate samples do not match the starts".into()));
        }
        Ok(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> PredicateIndex {
        // columns 0,1 -> predicate 1; columns 2,3 -> predicate 2
        PredicateIndex::build([1, 1, 2, 2], 2, 2).unwrap()
    }

    #[test]
    fn select_and_rank() {
        let idx = example();
        assert_eq!(idx.starts(), &[0, 2, 4]);
        assert_eq!(idx.samples(), &[1, 2, 2]);
        assert_eq!(idx.select(2).unwrap(), 2);
        assert_eq!(idx.rank(3).unwrap(), 2);
        assert_eq!(idx.rank(0).unwrap(), 1);
        assert_eq!(idx.rank(1).unwrap(), 1);
        assert_eq!(idx.columns(1).unwrap(), 0..2);
    }

    #[test]
    fn out_of_range() {
        let idx = example();
        assert!(idx.select(0).is_err());
        assert!(idx.select(3).is_err());
        assert!(idx.rank(4).is_err());
        assert!(PredicateIndex::build([3], 2, 2).is_err());
        assert!(PredicateIndex::build([2, 1], 2, 2).is_err());
        assert!(PredicateIndex::build([1], 1, 0).is_err());
    }

    #[test]
    fn unused_predicates_have_empty_ranges() {
        let idx = PredicateIndex::build([1, 3, 3, 5], 5, 1).unwrap();
        assert!(idx.columns(2).unwrap().is_empty());
        assert!(idx.columns(4).unwrap().is_empty());
        assert_eq!(idx.rank(1).unwrap(), 3);
        assert_eq!(idx.rank(3).unwrap(), 5);
    }

    #[test]
    fn empty() {
        let idx = PredicateIndex::build([], 0, 4).unwrap();
        assert!(idx.is_empty());
        assert!(idx.samples().is_empty());
        assert!(idx.rank(0).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let idx = PredicateIndex::build([1, 1, 2, 4, 4, 4], 4, 2).unwrap();
        let mut buf = Vec::new();
        let n = idx.serialize_into(&mut buf).unwrap();
        assert_eq!(n, buf.len());
        assert_eq!(PredicateIndex::deserialize_from(&mut buf.as_slice(), 2).unwrap(), idx);
        assert!(PredicateIndex::deserialize_from(&mut buf.as_slice(), 3).is_err());
    }

    proptest! {
        #[test]
        fn rank_matches_linear_scan(
            mut preds in proptest::collection::vec(1u32..40, 1..400),
            period in 1usize..64,
        ) {
            preds.sort_unstable();
            let idx = PredicateIndex::build(preds.iter().copied(), 40, period).unwrap();
            for (i, &p) in preds.iter().enumerate() {
                prop_assert_eq!(idx.rank(i as u64).unwrap(), p);
            }
            for p in 1..=40u32 {
                let cols = idx.columns(p).unwrap();
                prop_assert_eq!(cols.end - cols.start, preds.iter().filter(|&&q| q == p).count() as u64);
                if !cols.is_empty() {
                    prop_assert_eq!(idx.rank(idx.select(p).unwrap()).unwrap(), p);
                }
            }
        }
    }
}
