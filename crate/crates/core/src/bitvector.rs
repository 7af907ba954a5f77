//! Plain bit sequence with sampled rank/select support.
//!
//! Bits are packed into 64-bit words. A cumulative popcount is sampled every
//! `sample_rate` bits; rank adds a popcount over at most one sample block,
//! select binary-searches the samples and scans forward.
//!
//! Rank is inclusive and 0-based: `rank1(i)` counts the ones in `[0, i]`.
//! Select is 1-based on the ordinal: `select1(1)` is the position of the
//! first one.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::io::{read_len, read_u64_vec, write_u64, write_u64_slice, MAX_LEN};

const WORD: usize = 64;

/// Sampling density presets for rank acceleration tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplePreset {
    /// One 64-bit sample per 20 words: 5% on top of the bit data.
    #[default]
    Default,
    /// One 64-bit sample per 8 words: 12.5% on top of the bit data.
    Dense,
}

impl SamplePreset {
    pub fn sample_rate(self) -> usize {
        match self {
            SamplePreset::Default => 20 * WORD,
            SamplePreset::Dense => 8 * WORD,
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            SamplePreset::Default => 0,
            SamplePreset::Dense => 1,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(SamplePreset::Default),
            1 => Ok(SamplePreset::Dense),
            t => Err(Error::Format(format!("unknown sample preset tag {t}"))),
        }
    }
}

/// Growable bit buffer used while building succinct structures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawBits {
    words: Vec<u64>,
    len: usize,
}

impl RawBits {
    pub fn new() -> Self {
        Self::default()
    }

    /// `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD] |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    /// Appends `n` zero bits.
    pub fn extend_zeros(&mut self, n: usize) {
        self.len += n;
        self.words.resize(self.len.div_ceil(WORD), 0);
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }
}

impl FromIterator<bool> for RawBits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut bits = RawBits::new();
        for b in iter {
            bits.push(b);
        }
        bits
    }
}

/// Immutable bit sequence answering rank, select and access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    sample_rate: usize,
    /// `rank_samples[j]` = number of ones in `[0, j * sample_rate)`.
    rank_samples: Vec<u64>,
}

impl Default for BitVector {
    fn default() -> Self {
        BitVector::from_raw(RawBits::new(), SamplePreset::Default.sample_rate())
    }
}

impl BitVector {
    /// Builds from a sequence of booleans. Panics if `sample_rate` is zero.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I, sample_rate: usize) -> Self {
        Self::from_raw(bits.into_iter().collect(), sample_rate)
    }

    pub fn from_raw(raw: RawBits, sample_rate: usize) -> Self {
        Self::from_words(raw.words, raw.len, sample_rate)
    }

    fn from_words(words: Vec<u64>, len: usize, sample_rate: usize) -> Self {
        assert!(sample_rate >= 1, "sample rate must be positive");
        debug_assert_eq!(words.len(), len.div_ceil(WORD));
        let mut bv = BitVector {
            words,
            len,
            ones: 0,
            sample_rate,
            rank_samples: Vec::new(),
        };
        bv.build_samples();
        bv
    }

    fn build_samples(&mut self) {
        let n_samples = self.len / self.sample_rate + 1;
        let mut samples = Vec::with_capacity(n_samples);
        samples.push(0u64);
        let mut acc = 0u64;
        for j in 1..n_samples {
            let lo = (j - 1) * self.sample_rate;
            acc += self.count_range(lo, lo + self.sample_rate) as u64;
            samples.push(acc);
        }
        let tail = (n_samples - 1) * self.sample_rate;
        self.ones = acc as usize + self.count_range(tail, self.len);
        self.rank_samples = samples;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn sample_rate(&self) -> usize {
        self.sample_rate
    }

    /// Ones in `[start, end)`; both bounds must be `<= len`.
    fn count_range(&self, start: usize, end: usize) -> usize {
        if start >= end {
            return 0;
        }
        let (sw, sb) = (start / WORD, start % WORD);
        let (ew, eb) = (end / WORD, end % WORD);
        if sw == ew {
            let w = self.words[sw] >> sb;
            return (w & ((1u64 << (eb - sb)) - 1)).count_ones() as usize;
        }
        let mut c = (self.words[sw] >> sb).count_ones() as usize;
        for w in &self.words[sw + 1..ew] {
            c += w.count_ones() as usize;
        }
        if eb > 0 {
            c += (self.words[ew] & ((1u64 << eb) - 1)).count_ones() as usize;
        }
        c
    }

    /// Number of ones strictly before position `i` (`i <= len`).
    ///
    /// This is the exclusive form used by navigation code; it panics when
    /// `i > len`.
    #[inline]
    pub fn ones_before(&self, i: usize) -> usize {
        assert!(i <= self.len, "position {i} out of range {}", self.len);
        let j = i / self.sample_rate;
        self.rank_samples[j] as usize + self.count_range(j * self.sample_rate, i)
    }

    /// Bit at `i` without the `Option` wrapper; panics when out of range.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "position {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn access(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.get(i))
    }

    /// Ones in `[0, i]`.
    pub fn rank1(&self, i: usize) -> Option<usize> {
        (i < self.len).then(|| self.ones_before(i + 1))
    }

    /// Zeros in `[0, i]`.
    pub fn rank0(&self, i: usize) -> Option<usize> {
        self.rank1(i).map(|r| i + 1 - r)
    }

    /// Position of the `j`-th one (1-based ordinal).
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.ones {
            return None;
        }
        // last sample block whose prefix count is still below j
        let block = self
            .rank_samples
            .partition_point(|&c| (c as usize) < j)
            .saturating_sub(1);
        let start = block * self.sample_rate;
        let remaining = j - self.rank_samples[block] as usize;
        Some(self.scan_select(start, remaining, |w| w))
    }

    /// Position of the `j`-th zero (1-based ordinal).
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let rate = self.sample_rate;
        let zeros_before = |b: usize| b * rate - self.rank_samples[b] as usize;
        let mut lo = 0;
        let mut hi = self.rank_samples.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before(mid) < j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let start = lo * rate;
        let remaining = j - zeros_before(lo);
        Some(self.scan_select(start, remaining, |w| !w))
    }

    /// Scans words from bit `start` for the `remaining`-th set bit of
    /// `view(word)`. The caller guarantees the answer lies before `len`.
    fn scan_select(&self, start: usize, mut remaining: usize, view: impl Fn(u64) -> u64) -> usize {
        let mut wi = start / WORD;
        let mut w = view(self.words[wi]) & (!0u64 << (start % WORD));
        loop {
            let c = w.count_ones() as usize;
            if remaining <= c {
                return wi * WORD + select_in_word(w, remaining - 1);
            }
            remaining -= c;
            wi += 1;
            w = view(self.words[wi]);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Heap bytes of the bit data alone.
    pub fn bit_bytes(&self) -> usize {
        self.words.len() * 8
    }

    /// Heap bytes of the rank acceleration table.
    pub fn sample_bytes(&self) -> usize {
        self.rank_samples.len() * 8
    }

    pub fn size_in_bytes(&self) -> usize {
        self.bit_bytes() + self.sample_bytes()
    }

    /// Writes the length then the packed words, little-endian. Acceleration
    /// tables are not written; they are rebuilt by [`BitVector::deserialize_from`].
    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u64(w, self.len as u64)?;
        n += write_u64_slice(w, &self.words)?;
        Ok(n)
    }

    pub fn deserialize_from<R: Read>(r: &mut R, sample_rate: usize) -> Result<Self> {
        let len = read_len(r, MAX_LEN, "bit vector")?;
        let words = read_u64_vec(r, len.div_ceil(WORD))?;
        if len % WORD != 0 {
            if let Some(&last) = words.last() {
                if last >> (len % WORD) != 0 {
                    return Err(Error::Format("bits set past bit vector end".into()));
                }
            }
        }
        if sample_rate == 0 {
            return Err(Error::Config("sample rate must be positive".into()));
        }
        Ok(Self::from_words(words, len, sample_rate))
    }
}

#[inline]
fn select_in_word(mut w: u64, k: usize) -> usize {
    for _ in 0..k {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}
