//! Dictionary of distinct leaf submatrices.
//!
//! Cells of a `k_L x k_L` leaf are numbered row-major, `r * k_L + c`.

use std::io::{Read, Write};

use super::config::VocabEncoding;
use crate::bitvector::{BitVector, RawBits};
use crate::error::{check_range, Error, Result};
use crate::intarray::IntArray;
use crate::io::{read_len, read_u32, read_u8, write_u32, write_u64, write_u8, MAX_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Plain(BitVector),
    ColsFull { cols: BitVector, rows: IntArray },
    ColsRank { cols: BitVector, rows: IntArray },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafVocabulary {
    leaf_size: u32,
    len: usize,
    repr: Repr,
}

/// A leaf matrix as packed row-major bits.
pub type LeafBits = Vec<u64>;

pub(crate) fn leaf_words(leaf_size: u32) -> usize {
    ((leaf_size as usize) * (leaf_size as usize)).div_ceil(64)
}

#[inline]
pub(crate) fn leaf_bit(bits: &[u64], i: usize) -> bool {
    (bits[i / 64] >> (i % 64)) & 1 == 1
}

impl LeafVocabulary {
    /// Encodes `entries` (already in id order). Column encodings fail with
    /// [`Error::VocabularyConflict`] if any leaf column holds two ones.
    pub fn build(
        entries: &[LeafBits],
        leaf_size: u32,
        encoding: VocabEncoding,
        sample_rate: usize,
    ) -> Result<Self> {
        let kl = leaf_size as usize;
        let cells = kl * kl;
        let repr = match encoding {
            VocabEncoding::Plain => {
                let mut bits = RawBits::zeros(entries.len() * cells);
                for (e, leaf) in entries.iter().enumerate() {
                    for i in (0..cells).filter(|&i| leaf_bit(leaf, i)) {
                        bits.set(e * cells + i);
                    }
                }
                Repr::Plain(BitVector::from_raw(bits, sample_rate))
            }
            VocabEncoding::ColsFull | VocabEncoding::ColsRank => {
                let full = encoding == VocabEncoding::ColsFull;
                let row_bits = leaf_size.trailing_zeros();
                let mut cols = RawBits::zeros(entries.len() * kl);
                let mut rows = IntArray::new(row_bits);
                for (e, leaf) in entries.iter().enumerate() {
                    for c in 0..kl {
                        let mut set = (0..kl).filter(|&r| leaf_bit(leaf, r * kl + c));
                        let row = set.next();
                        if set.next().is_some() {
                            return Err(Error::VocabularyConflict(encoding.name()));
                        }
                        match row {
                            Some(r) => {
                                cols.set(e * kl + c);
                                rows.push(r as u64);
                            }
                            None if full => rows.push(0),
                            None => {}
                        }
                    }
                }
                let cols = BitVector::from_raw(cols, sample_rate);
                if full {
                    Repr::ColsFull { cols, rows }
                } else {
                    Repr::ColsRank { cols, rows }
                }
            }
        };
        Ok(LeafVocabulary {
            leaf_size,
            len: entries.len(),
            repr,
        })
    }

    /// Number of distinct leaf matrices.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn leaf_size(&self) -> u32 {
        self.leaf_size
    }

    pub fn encoding(&self) -> VocabEncoding {
        match self.repr {
            Repr::Plain(_) => VocabEncoding::Plain,
            Repr::ColsFull { .. } => VocabEncoding::ColsFull,
            Repr::ColsRank { .. } => VocabEncoding::ColsRank,
        }
    }

    /// Bit `(r, c)` of entry `e`, with bounds checks.
    pub fn bit(&self, e: usize, r: usize, c: usize) -> Result<bool> {
        check_range("vocabulary entry", e as u64, self.len as u64)?;
        check_range("leaf row", r as u64, self.leaf_size as u64)?;
        check_range("leaf column", c as u64, self.leaf_size as u64)?;
        Ok(self.get(e, r, c))
    }

    #[inline]
    pub(crate) fn get(&self, e: usize, r: usize, c: usize) -> bool {
        let kl = self.leaf_size as usize;
        match &self.repr {
            Repr::Plain(bits) => bits.get(e * kl * kl + r * kl + c),
            Repr::ColsFull { cols, rows } => {
                let i = e * kl + c;
                cols.get(i) && rows.get(i) as usize == r
            }
            Repr::ColsRank { cols, rows } => {
                let i = e * kl + c;
                cols.get(i) && rows.get(cols.ones_before(i + 1) - 1) as usize == r
            }
        }
    }

    /// Row holding the single one of column `c` in entry `e`, if any. Only
    /// meaningful for column encodings; the plain encoding scans the column.
    #[inline]
    pub(crate) fn column_row(&self, e: usize, c: usize) -> Option<usize> {
        let kl = self.leaf_size as usize;
        match &self.repr {
            Repr::Plain(bits) => (0..kl).find(|&r| bits.get(e * kl * kl + r * kl + c)),
            Repr::ColsFull { cols, rows } => {
                let i = e * kl + c;
                cols.get(i).then(|| rows.get(i) as usize)
            }
            Repr::ColsRank { cols, rows } => {
                let i = e * kl + c;
                cols.get(i).then(|| rows.get(cols.ones_before(i + 1) - 1) as usize)
            }
        }
    }

    /// Ones in entry `e`.
    pub fn entry_ones(&self, e: usize) -> usize {
        let kl = self.leaf_size as usize;
        (0..kl)
            .flat_map(|r| (0..kl).map(move |c| (r, c)))
            .filter(|&(r, c)| self.get(e, r, c))
            .count()
    }

    /// Payload size in bits, excluding rank samples and headers.
    ///
    /// For the full column encoding this is `m * k_L * (1 + log2 k_L)`.
    pub fn payload_bits(&self) -> usize {
        match &self.repr {
            Repr::Plain(bits) => bits.len(),
            Repr::ColsFull { cols, rows } | Repr::ColsRank { cols, rows } => {
                cols.len() + rows.payload_bits()
            }
        }
    }

    pub fn size_in_bytes(&self) -> usize {
        match &self.repr {
            Repr::Plain(bits) => bits.size_in_bytes(),
            Repr::ColsFull { cols, rows } | Repr::ColsRank { cols, rows } => {
                cols.size_in_bytes() + rows.size_in_bytes()
            }
        }
    }

    pub(crate) fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u8(w, self.encoding().tag())?;
        n += write_u32(w, self.leaf_size)?;
        n += write_u64(w, self.len as u64)?;
        match &self.repr {
            Repr::Plain(bits) => n += bits.serialize_into(w)?,
            Repr::ColsFull { cols, rows } | Repr::ColsRank { cols, rows } => {
                n += cols.serialize_into(w)?;
                n += rows.serialize_into(w)?;
            }
        }
        Ok(n)
    }

    pub(crate) fn deserialize_from<R: Read>(r: &mut R, sample_rate: usize) -> Result<Self> {
        let encoding = VocabEncoding::from_tag(read_u8(r)?)?;
        let leaf_size = read_u32(r)?;
        if leaf_size < 2 || !leaf_size.is_power_of_two() || leaf_size > 1 << 16 {
            return Err(Error::Format(format!("leaf size {leaf_size}")));
        }
        let len = read_len(r, MAX_LEN, "vocabulary")?;
        let kl = leaf_size as usize;
        let bad = |what: &str| Error::Format(format!("vocabulary {what} has wrong size"));
        let repr = match encoding {
            VocabEncoding::Plain => {
                let bits = BitVector::deserialize_from(r, sample_rate)?;
                if bits.len() != len * kl * kl {
                    return Err(bad("bitmap"));
                }
                Repr::Plain(bits)
            }
            VocabEncoding::ColsFull | VocabEncoding::ColsRank => {
                let cols = BitVector::deserialize_from(r, sample_rate)?;
                let rows = IntArray::deserialize_from(r)?;
                let expected_rows = if encoding == VocabEncoding::ColsFull {
                    cols.len()
                } else {
                    cols.count_ones()
                };
                if cols.len() != len * kl {
                    return Err(bad("column bitmap"));
                }
                if rows.len() != expected_rows || rows.width() != leaf_size.trailing_zeros() {
                    return Err(bad("row array"));
                }
                if encoding == VocabEncoding::ColsFull {
                    Repr::ColsFull { cols, rows }
                } else {
                    Repr::ColsRank { cols, rows }
                }
            }
        };
        Ok(LeafVocabulary {
            leaf_size,
            len,
            repr,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RATE: usize = 64;

    /// Packs a row-major 0/1 grid.
    fn leaf(grid: &[&[u8]]) -> LeafBits {
        let kl = grid.len();
        let mut words = vec![0u64; leaf_words(kl as u32)];
        for (r, row) in grid.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 1 {
                    let i = r * kl + c;
                    words[i / 64] |= 1 << (i % 64);
                }
            }
        }
        words
    }

    #[test]
    fn cols_full_hand_encoding() {
        let entries = vec![leaf(&[&[0, 1], &[0, 0]])];
        let v = LeafVocabulary::build(&entries, 2, VocabEncoding::ColsFull, RATE).unwrap();
        let Repr::ColsFull { cols, rows } = &v.repr else { panic!() };
        assert_eq!(cols.iter().collect::<Vec<_>>(), vec![false, true]);
        assert_eq!(rows.iter().collect::<Vec<_>>(), vec![0, 0]);
        assert!(v.bit(0, 0, 1).unwrap());
        assert!(!v.bit(0, 1, 1).unwrap());
        assert!(!v.bit(0, 0, 0).unwrap());
        assert_eq!(v.payload_bits(), 2 * (1 + 1));
    }

    #[test]
    fn cols_rank_hand_encoding() {
        let entries = vec![leaf(&[&[0, 1], &[0, 0]])];
        let v = LeafVocabulary::build(&entries, 2, VocabEncoding::ColsRank, RATE).unwrap();
        let Repr::ColsRank { cols, rows } = &v.repr else { panic!() };
        assert_eq!(cols.iter().collect::<Vec<_>>(), vec![false, true]);
        assert_eq!(rows.iter().collect::<Vec<_>>(), vec![0]);
        assert!(v.bit(0, 0, 1).unwrap());
        assert!(!v.bit(0, 1, 1).unwrap());
    }

    #[test]
    fn encodings_agree() {
        let entries = vec![
            leaf(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]]),
            leaf(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1]]),
            leaf(&[&[1, 1, 1, 1], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]),
        ];
        let vs: Vec<_> = [VocabEncoding::Plain, VocabEncoding::ColsFull, VocabEncoding::ColsRank]
            .into_iter()
            .map(|enc| LeafVocabulary::build(&entries, 4, enc, RATE).unwrap())
            .collect();
        for e in 0..3 {
            for r in 0..4 {
                for c in 0..4 {
                    let expected = leaf_bit(&entries[e], r * 4 + c);
                    for v in &vs {
                        assert_eq!(v.bit(e, r, c).unwrap(), expected);
                    }
                }
            }
            for v in &vs {
                for c in 0..4 {
                    let expected = (0..4).find(|&r| leaf_bit(&entries[e], r * 4 + c));
                    assert_eq!(v.column_row(e, c), expected);
                }
            }
        }
        assert_eq!(vs[1].payload_bits(), 3 * 4 * (1 + 2));
        assert_eq!(vs[2].payload_bits(), 3 * 4 + 8 * 2);
        assert_eq!(vs[0].payload_bits(), 3 * 16);
    }

    #[test]
    fn column_conflict_is_rejected() {
        let entries = vec![leaf(&[&[1, 0], &[1, 0]])];
        assert!(LeafVocabulary::build(&entries, 2, VocabEncoding::Plain, RATE).is_ok());
        for enc in [VocabEncoding::ColsFull, VocabEncoding::ColsRank] {
            assert!(matches!(
                LeafVocabulary::build(&entries, 2, enc, RATE),
                Err(Error::VocabularyConflict(_))
            ));
        }
    }

    #[test]
    fn bounds_are_checked() {
        let entries = vec![leaf(&[&[0, 1], &[0, 0]])];
        let v = LeafVocabulary::build(&entries, 2, VocabEncoding::Plain, RATE).unwrap();
        assert!(v.bit(1, 0, 0).is_err());
        assert!(v.bit(0, 2, 0).is_err());
        assert!(v.bit(0, 0, 2).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let entries = vec![leaf(&[&[0, 1], &[1, 0]]), leaf(&[&[0, 0], &[0, 1]])];
        for enc in [VocabEncoding::Plain, VocabEncoding::ColsFull, VocabEncoding::ColsRank] {
            let v = LeafVocabulary::build(&entries, 2, enc, RATE).unwrap();
            let mut buf = Vec::new();
            let n = v.serialize_into(&mut buf).unwrap();
            assert_eq!(n, buf.len());
            assert_eq!(LeafVocabulary::deserialize_from(&mut buf.as_slice(), RATE).unwrap(), v);
        }
    }
}
