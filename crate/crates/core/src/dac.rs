//! Directly addressable codes.
//!
//! Each value is cut into `b`-bit chunks, least significant first. Chunk `t`
//! of every value that has one is stored at level `t`; the bitmap of level
//! `t` marks which of those values continue at level `t + 1`. Access follows
//! the chain with one rank per extra level:
//! `next = rank1(B_t, j) - 1` (inclusive rank).

use std::io::{Read, Write};

use crate::bitvector::{BitVector, RawBits};
use crate::error::{check_range, Error, Result};
use crate::intarray::{bit_width, IntArray};
use crate::io::{read_len, read_u32, write_u32, write_u64, MAX_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    chunks: IntArray,
    more: BitVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dac {
    chunk_bits: u32,
    levels: Vec<Level>,
}

impl Dac {
    /// Encodes `values` with `chunk_bits`-bit chunks. Zero occupies one chunk.
    pub fn encode(values: &[u64], chunk_bits: u32, sample_rate: usize) -> Result<Self> {
        if chunk_bits == 0 || chunk_bits > 64 {
            return Err(Error::Config(format!("DAC chunk width {chunk_bits} not in 1..=64")));
        }
        let chunks_of = |v: u64| bit_width(v).max(1).div_ceil(chunk_bits);
        let depth = values.iter().map(|&v| chunks_of(v)).max().unwrap_or(1) as usize;
        let mask = if chunk_bits == 64 { !0 } else { (1u64 << chunk_bits) - 1 };

        let mut levels = Vec::with_capacity(depth);
        // values still alive at the current level, in level order
        let mut alive: Vec<u64> = values.to_vec();
        for t in 0..depth {
            let mut chunks = IntArray::with_capacity(chunk_bits, alive.len());
            let mut more = RawBits::new();
            let mut next = Vec::new();
            for &v in &alive {
                chunks.push(v & mask);
                let rest = if t + 1 < depth && chunk_bits < 64 { v >> chunk_bits } else { 0 };
                let cont = rest != 0;
                more.push(cont);
                if cont {
                    next.push(rest);
                }
            }
            levels.push(Level {
                chunks,
                more: BitVector::from_raw(more, sample_rate),
            });
            alive = next;
        }
        Ok(Dac { chunk_bits, levels })
    }

    pub fn len(&self) -> usize {
        self.levels.first().map_or(0, |l| l.chunks.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn chunk_bits(&self) -> u32 {
        self.chunk_bits
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Total chunks stored over all levels.
    pub fn total_chunks(&self) -> usize {
        self.levels.iter().map(|l| l.chunks.len()).sum()
    }

    /// Chunks at `level`, for inspection.
    pub fn level_chunks(&self, level: usize) -> Vec<u64> {
        self.levels[level].chunks.iter().collect()
    }

    /// Continuation bitmap of `level`, for inspection.
    pub fn level_bitmap(&self, level: usize) -> &BitVector {
        &self.levels[level].more
    }

    pub fn access(&self, i: usize) -> Result<u64> {
        check_range("DAC index", i as u64, self.len() as u64)?;
        Ok(self.get(i))
    }

    /// Unchecked variant of [`Dac::access`]; panics when out of range.
    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        let mut j = i;
        let mut value = 0u64;
        let mut shift = 0u32;
        for level in &self.levels {
            value |= level.chunks.get(j) << shift;
            if !level.more.get(j) {
                break;
            }
            j = level.more.ones_before(j + 1) - 1;
            shift += self.chunk_bits;
        }
        value
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn size_in_bytes(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.chunks.size_in_bytes() + l.more.size_in_bytes())
            .sum()
    }

    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u32(w, self.chunk_bits)?;
        n += write_u32(w, self.levels.len() as u32)?;
        for level in &self.levels {
            n += write_u64(w, level.chunks.len() as u64)?;
            n += level.chunks.write_words(w)?;
            n += level.more.serialize_into(w)?;
        }
        Ok(n)
    }

    pub fn deserialize_from<R: Read>(r: &mut R, sample_rate: usize) -> Result<Self> {
        let chunk_bits = read_u32(r)?;
        if chunk_bits == 0 || chunk_bits > 64 {
            return Err(Error::Format(format!("DAC chunk width {chunk_bits}")));
        }
        let n_levels = read_u32(r)? as usize;
        if n_levels == 0 || n_levels > 64 {
            return Err(Error::Format(format!("DAC level count {n_levels}")));
        }
        let mut levels = Vec::with_capacity(n_levels);
        let mut expected: Option<usize> = None;
        for t in 0..n_levels {
            let count = read_len(r, MAX_LEN, "DAC level")?;
            if let Some(e) = expected {
                if e != count {
                    return Err(Error::Format(format!("DAC level {t} has {count} chunks, expected {e}")));
                }
            }
            let chunks = IntArray::read_words(r, chunk_bits, count)?;
            let more = BitVector::deserialize_from(r, sample_rate)?;
            if more.len() != count {
                return Err(Error::Format("DAC bitmap length mismatch".into()));
            }
            expected = Some(more.count_ones());
            levels.push(Level { chunks, more });
        }
        if expected != Some(0) {
            return Err(Error::Format("last DAC level continues".into()));
        }
        Ok(Dac { chunk_bits, levels })
    }
}
