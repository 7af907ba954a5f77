//! k²-tree over a sparse binary matrix.
//!
//! The matrix is padded to a square of side `product(k_l) * k_L` and split
//! recursively into `k_l x k_l` blocks, read row-major. One bit per block
//! records whether it holds any one. Bits are kept level by level: `T` holds
//! every level except the last, `L` the last one. With a leaf vocabulary the
//! subdivision stops at `k_L x k_L` blocks; `T` then holds every level and
//! each nonempty leaf is replaced by a frequency-ranked id stored in a DAC.
//!
//! Positions are addressed in the concatenation `T:L`. The children of a set
//! bit `p` at level `l` are `k_{l+1}^2` consecutive bits starting at
//! `start(l+1) + (rank1(T, p) - ones_before(l) - 1) * k_{l+1}^2`, which is
//! `rank1(T, p) * k^2` when every level uses the same `k`.
//!
//! Range results come out in depth-first block order: blocks are visited
//! row-major at every level. Single-row queries therefore yield ascending
//! columns and single-column queries ascending rows.

mod build;
mod config;
mod vocab;

use std::io::{Read, Write};
use std::ops::Range;

pub use build::LEAF_ID_CHUNK_BITS;
pub use config::{K2Config, Stage, VocabEncoding};
pub use vocab::{LeafBits, LeafVocabulary};

use crate::bitvector::BitVector;
use crate::dac::Dac;
use crate::error::{check_range, Error, Result};
use crate::io::{read_u64, read_u8, write_u64, write_u8};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Layout {
    arities: Vec<u32>,
    /// Side of the block one bit stands for, per level.
    sub_sides: Vec<u64>,
    side: u64,
}

impl Layout {
    fn new(arities: Vec<u32>, leaf_size: u32) -> Self {
        let mut sub_sides = vec![0u64; arities.len()];
        let mut s = leaf_size as u64;
        for l in (0..arities.len()).rev() {
            sub_sides[l] = s;
            s *= arities[l] as u64;
        }
        Layout {
            arities,
            sub_sides,
            side: s,
        }
    }

    fn children_per_node(&self, level: usize) -> usize {
        let k = self.arities[level] as usize;
        k * k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Leaves {
    /// Last level as plain bits (`L`).
    Bits(BitVector),
    Vocab { ids: Dac, vocab: LeafVocabulary },
}

/// Byte counts of a tree's in-memory parts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TreeSpace {
    /// Bit data of `T` and `L`.
    pub bits: usize,
    /// Rank samples of `T` and `L`.
    pub rank_samples: usize,
    /// DAC of leaf ids, including its bitmaps and their samples.
    pub leaf_ids: usize,
    pub vocabulary: usize,
}

impl TreeSpace {
    pub fn total(&self) -> usize {
        self.bits + self.rank_samples + self.leaf_ids + self.vocabulary
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K2Tree {
    config: K2Config,
    n_rows: u64,
    n_cols: u64,
    layout: Layout,
    /// First `T:L` position of each level, plus the total length.
    level_start: Vec<usize>,
    /// Ones of `T` before each level's start.
    ones_before_level: Vec<usize>,
    t: BitVector,
    leaves: Leaves,
    n_points: u64,
}

impl K2Tree {
    /// Builds a tree holding exactly `points` in an `n_rows x n_cols` matrix.
    /// Duplicate points are merged.
    pub fn build(points: &[(u64, u64)], n_rows: u64, n_cols: u64, config: &K2Config) -> Result<Self> {
        build::build(points, n_rows, n_cols, config)
    }

    fn assemble(
        config: K2Config,
        n_rows: u64,
        n_cols: u64,
        layout: Layout,
        t: BitVector,
        leaves: Leaves,
        n_points: u64,
    ) -> Result<Self> {
        let h = layout.arities.len();
        let vocab = matches!(leaves, Leaves::Vocab { .. });
        let levels_in_t = if vocab { h } else { h - 1 };
        let mut level_start = Vec::with_capacity(h + 1);
        let mut ones_before_level = Vec::with_capacity(levels_in_t);
        let mut pos = 0usize;
        let mut size = layout.children_per_node(0);
        for l in 0..h {
            level_start.push(pos);
            let end = pos + size;
            if l < levels_in_t {
                if end > t.len() {
                    return Err(Error::Format(format!("level {l} runs past T")));
                }
                let before = t.ones_before(pos);
                ones_before_level.push(before);
                let ones = t.ones_before(end) - before;
                if l + 1 < h {
                    size = ones * layout.children_per_node(l + 1);
                } else if let Leaves::Vocab { ids, .. } = &leaves {
                    if ids.len() != ones {
                        return Err(Error::Format(format!("{ones} leaves but {} leaf ids", ids.len())));
                    }
                }
            }
            pos = end;
        }
        level_start.push(pos);
        match &leaves {
            Leaves::Bits(l) => {
                let last = level_start[h] - level_start[h - 1];
                if t.len() != level_start[h - 1] || l.len() != last {
                    return Err(Error::Format("T/L lengths do not match the level layout".into()));
                }
            }
            Leaves::Vocab { ids, vocab } => {
                if t.len() != level_start[h] {
                    return Err(Error::Format("T length does not match the level layout".into()));
                }
                if vocab.leaf_size() != config.leaf_size {
                    return Err(Error::Format("vocabulary leaf size differs from config".into()));
                }
                if ids.iter().any(|e| e >= vocab.len() as u64) {
                    return Err(Error::Format("leaf id past vocabulary end".into()));
                }
            }
        }
        Ok(K2Tree {
            config,
            n_rows,
            n_cols,
            layout,
            level_start,
            ones_before_level,
            t,
            leaves,
            n_points,
        })
    }

    pub fn config(&self) -> &K2Config {
        &self.config
    }

    pub fn n_rows(&self) -> u64 {
        self.n_rows
    }

    pub fn n_cols(&self) -> u64 {
        self.n_cols
    }

    /// Padded side of the conceptual square matrix.
    pub fn side(&self) -> u64 {
        self.layout.side
    }

    /// Number of ones in the matrix.
    pub fn count_ones(&self) -> u64 {
        self.n_points
    }

    /// Number of bit levels (leaf cells of a vocabulary are not a level).
    pub fn num_levels(&self) -> usize {
        self.layout.arities.len()
    }

    pub fn arity(&self, level: usize) -> u32 {
        self.layout.arities[level]
    }

    /// Side of the block represented by one bit of `level`.
    pub fn block_side(&self, level: usize) -> u64 {
        self.layout.sub_sides[level]
    }

    /// `T:L` positions of `level`.
    pub fn level_range(&self, level: usize) -> Range<usize> {
        self.level_start[level]..self.level_start[level + 1]
    }

    pub fn t(&self) -> &BitVector {
        &self.t
    }

    /// The last level when no vocabulary is used.
    pub fn l(&self) -> Option<&BitVector> {
        match &self.leaves {
            Leaves::Bits(l) => Some(l),
            Leaves::Vocab { .. } => None,
        }
    }

    pub fn vocabulary(&self) -> Option<&LeafVocabulary> {
        match &self.leaves {
            Leaves::Vocab { vocab, .. } => Some(vocab),
            Leaves::Bits(_) => None,
        }
    }

    pub fn leaf_ids(&self) -> Option<&Dac> {
        match &self.leaves {
            Leaves::Vocab { ids, .. } => Some(ids),
            Leaves::Bits(_) => None,
        }
    }

    /// Length of `T:L`.
    pub fn total_bits(&self) -> usize {
        self.level_start[self.num_levels()]
    }

    /// Bit at `T:L` position `pos`.
    #[inline]
    pub fn bit(&self, pos: usize) -> bool {
        if pos < self.t.len() {
            self.t.get(pos)
        } else {
            match &self.leaves {
                Leaves::Bits(l) => l.get(pos - self.t.len()),
                Leaves::Vocab { .. } => panic!("position {pos} past T"),
            }
        }
    }

    fn level_of(&self, pos: usize) -> usize {
        self.level_start.partition_point(|&s| s <= pos) - 1
    }

    #[inline]
    fn child_base(&self, pos: usize, level: usize) -> usize {
        let r = self.t.ones_before(pos + 1) - self.ones_before_level[level];
        self.level_start[level + 1] + (r - 1) * self.layout.children_per_node(level + 1)
    }

    #[inline]
    fn leaf_slot(&self, pos: usize) -> usize {
        let h = self.num_levels();
        self.t.ones_before(pos + 1) - self.ones_before_level[h - 1] - 1
    }

    /// Start of the children of the set bit at `pos`, or `None` when `pos`
    /// is a zero, lies outside `T:L`, or sits on the last level.
    pub fn children_base(&self, pos: usize) -> Option<usize> {
        if pos >= self.total_bits() {
            return None;
        }
        let level = self.level_of(pos);
        (level + 1 < self.num_levels() && self.bit(pos)).then(|| self.child_base(pos, level))
    }

    /// Index into the leaf-id sequence for a set bit on the last level of a
    /// vocabulary tree.
    pub fn leaf_index(&self, pos: usize) -> Option<usize> {
        if !matches!(self.leaves, Leaves::Vocab { .. }) || pos >= self.total_bits() {
            return None;
        }
        (self.level_of(pos) + 1 == self.num_levels() && self.bit(pos)).then(|| self.leaf_slot(pos))
    }

    pub fn cell(&self, r: u64, c: u64) -> Result<bool> {
        check_range("row", r, self.n_rows)?;
        check_range("column", c, self.n_cols)?;
        Ok(self.contains(r, c))
    }

    /// Cell lookup without bounds checks against the logical size.
    pub(crate) fn contains(&self, r: u64, c: u64) -> bool {
        let h = self.num_levels();
        let (mut r0, mut c0, mut base) = (0u64, 0u64, 0usize);
        for level in 0..h {
            let k = self.layout.arities[level] as u64;
            let s = self.layout.sub_sides[level];
            let (ri, ci) = ((r - r0) / s, (c - c0) / s);
            let pos = base + (ri * k + ci) as usize;
            if !self.bit(pos) {
                return false;
            }
            r0 += ri * s;
            c0 += ci * s;
            if level + 1 == h {
                return match &self.leaves {
                    Leaves::Bits(_) => true,
                    Leaves::Vocab { ids, vocab } => {
                        vocab.get(ids.get(self.leaf_slot(pos)) as usize, (r - r0) as usize, (c - c0) as usize)
                    }
                };
            }
            base = self.child_base(pos, level);
        }
        unreachable!("loop returns on the last level")
    }

    /// Columns `c` in `[lo, hi]` with `(r, c)` set, ascending.
    pub fn row(&self, r: u64, lo: u64, hi: u64, limit: Option<usize>) -> Result<Vec<u64>> {
        check_range("row", r, self.n_rows)?;
        self.check_span("column", lo, hi, self.n_cols)?;
        let mut out = Vec::new();
        self.for_each_in(r, r, lo, hi, |_, c| {
            out.push(c);
            limit.is_none_or(|l| out.len() < l)
        });
        Ok(out)
    }

    /// Rows `r` with `(r, c)` set, ascending.
    pub fn col(&self, c: u64, limit: Option<usize>) -> Result<Vec<u64>> {
        check_range("column", c, self.n_cols)?;
        let mut out = Vec::new();
        if self.n_rows > 0 {
            self.for_each_in(0, self.n_rows - 1, c, c, |r, _| {
                out.push(r);
                limit.is_none_or(|l| out.len() < l)
            });
        }
        Ok(out)
    }

    /// Set cells in `[r1, r2] x [c1, c2]`, in depth-first block order.
    pub fn range(&self, r1: u64, r2: u64, c1: u64, c2: u64) -> Result<Vec<(u64, u64)>> {
        self.check_span("row", r1, r2, self.n_rows)?;
        self.check_span("column", c1, c2, self.n_cols)?;
        let mut out = Vec::new();
        self.for_each_in(r1, r2, c1, c2, |r, c| {
            out.push((r, c));
            true
        });
        Ok(out)
    }

    fn check_span(&self, what: &'static str, lo: u64, hi: u64, limit: u64) -> Result<()> {
        check_range(what, hi, limit)?;
        if lo > hi {
            return Err(Error::OutOfRange { what, value: lo, limit: hi + 1 });
        }
        Ok(())
    }

    /// Visits every set cell of `[r1, r2] x [c1, c2]` in depth-first block
    /// order until `f` returns `false`. Returns `false` if stopped early.
    /// Bounds are clipped to the logical matrix.
    pub fn for_each_in<F>(&self, r1: u64, r2: u64, c1: u64, c2: u64, mut f: F) -> bool
    where
        F: FnMut(u64, u64) -> bool,
    {
        if self.n_rows == 0 || self.n_cols == 0 {
            return true;
        }
        let r2 = r2.min(self.n_rows - 1);
        let c2 = c2.min(self.n_cols - 1);
        if r1 > r2 || c1 > c2 {
            return true;
        }
        self.walk(0, 0, 0, 0, (r1, r2), (c1, c2), &mut f)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk<F>(&self, level: usize, base: usize, r0: u64, c0: u64, rows: (u64, u64), cols: (u64, u64), f: &mut F) -> bool
    where
        F: FnMut(u64, u64) -> bool,
    {
        let k = self.layout.arities[level] as u64;
        let s = self.layout.sub_sides[level];
        let span = k * s - 1;
        let (ri_lo, ri_hi) = ((rows.0.max(r0) - r0) / s, (rows.1.min(r0 + span) - r0) / s);
        let (ci_lo, ci_hi) = ((cols.0.max(c0) - c0) / s, (cols.1.min(c0 + span) - c0) / s);
        let last = level + 1 == self.num_levels();
        for ri in ri_lo..=ri_hi {
            for ci in ci_lo..=ci_hi {
                let pos = base + (ri * k + ci) as usize;
                if !self.bit(pos) {
                    continue;
                }
                let (br, bc) = (r0 + ri * s, c0 + ci * s);
                let go_on = if !last {
                    self.walk(level + 1, self.child_base(pos, level), br, bc, rows, cols, f)
                } else {
                    match &self.leaves {
                        Leaves::Bits(_) => f(br, bc),
                        Leaves::Vocab { ids, vocab } => {
                            let e = ids.get(self.leaf_slot(pos)) as usize;
                            self.walk_leaf(vocab, e, br, bc, rows, cols, f)
                        }
                    }
                };
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_leaf<F>(&self, vocab: &LeafVocabulary, e: usize, br: u64, bc: u64, rows: (u64, u64), cols: (u64, u64), f: &mut F) -> bool
    where
        F: FnMut(u64, u64) -> bool,
    {
        let kl = self.config.leaf_size as u64;
        let (r_lo, r_hi) = (rows.0.max(br), rows.1.min(br + kl - 1));
        let (c_lo, c_hi) = (cols.0.max(bc), cols.1.min(bc + kl - 1));
        if vocab.encoding() == VocabEncoding::Plain {
            for r in r_lo..=r_hi {
                for c in c_lo..=c_hi {
                    if vocab.get(e, (r - br) as usize, (c - bc) as usize) && !f(r, c) {
                        return false;
                    }
                }
            }
            return true;
        }
        // at most one cell per column
        if r_lo == r_hi || c_lo == c_hi {
            for c in c_lo..=c_hi {
                if let Some(lr) = vocab.column_row(e, (c - bc) as usize) {
                    let r = br + lr as u64;
                    if r >= r_lo && r <= r_hi && !f(r, c) {
                        return false;
                    }
                }
            }
            return true;
        }
        let mut cells: Vec<(u64, u64)> = (c_lo..=c_hi)
            .filter_map(|c| {
                let r = br + vocab.column_row(e, (c - bc) as usize)? as u64;
                (r >= r_lo && r <= r_hi).then_some((r, c))
            })
            .collect();
        cells.sort_unstable();
        cells.into_iter().all(|(r, c)| f(r, c))
    }

    /// In-memory byte counts per component.
    pub fn space(&self) -> TreeSpace {
        let mut s = TreeSpace {
            bits: self.t.bit_bytes(),
            rank_samples: self.t.sample_bytes(),
            ..TreeSpace::default()
        };
        match &self.leaves {
            Leaves::Bits(l) => {
                s.bits += l.bit_bytes();
                s.rank_samples += l.sample_bytes();
            }
            Leaves::Vocab { ids, vocab } => {
                s.leaf_ids = ids.size_in_bytes();
                s.vocabulary = vocab.size_in_bytes();
            }
        }
        s
    }

    pub fn size_in_bytes(&self) -> usize {
        self.space().total()
    }

    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = self.config.serialize_into(w)?;
        n += write_u64(w, self.n_rows)?;
        n += write_u64(w, self.n_cols)?;
        n += write_u64(w, self.layout.side)?;
        n += self.t.serialize_into(w)?;
        match &self.leaves {
            Leaves::Bits(l) => {
                n += write_u8(w, 0)?;
                n += l.serialize_into(w)?;
            }
            Leaves::Vocab { ids, vocab } => {
                n += write_u8(w, 1)?;
                n += ids.serialize_into(w)?;
                n += vocab.serialize_into(w)?;
            }
        }
        Ok(n)
    }

    pub fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let config = K2Config::deserialize_from(r)?;
        let n_rows = read_u64(r)?;
        let n_cols = read_u64(r)?;
        let side = read_u64(r)?;
        let layout = Layout::new(config.level_arities(n_rows.max(n_cols)), config.leaf_size);
        if layout.side != side {
            return Err(Error::Format(format!("side {side} does not match config (expected {})", layout.side)));
        }
        let rate = config.sample.sample_rate();
        let t = BitVector::deserialize_from(r, rate)?;
        let (leaves, n_points) = match read_u8(r)? {
            0 => {
                if config.has_vocabulary() {
                    return Err(Error::Format("plain leaves but config has a vocabulary".into()));
                }
                let l = BitVector::deserialize_from(r, rate)?;
                let ones = l.count_ones() as u64;
                (Leaves::Bits(l), ones)
            }
            1 => {
                if !config.has_vocabulary() {
                    return Err(Error::Format("vocabulary present but disabled in config".into()));
                }
                let ids = Dac::deserialize_from(r, rate)?;
                let vocab = LeafVocabulary::deserialize_from(r, rate)?;
                if vocab.encoding() != config.vocab_encoding {
                    return Err(Error::Format("vocabulary encoding differs from config".into()));
                }
                let per_entry: Vec<u64> = (0..vocab.len()).map(|e| vocab.entry_ones(e) as u64).collect();
                let ones = ids
                    .iter()
                    .map(|e| per_entry.get(e as usize).copied().unwrap_or(0))
                    .sum();
                (Leaves::Vocab { ids, vocab }, ones)
            }
            t => return Err(Error::Format(format!("unknown leaf tag {t}"))),
        };
        K2Tree::assemble(config, n_rows, n_cols, layout, t, leaves, n_points)
    }
}
