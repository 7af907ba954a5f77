use std::io::{Read, Write};

use crate::bitvector::SamplePreset;
use crate::error::{Error, Result};
use crate::io::{read_u32, read_u8, write_u32, write_u8};

/// A run of subdivision levels sharing one branching factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    /// Side of the `k x k` child grid.
    pub k: u32,
    /// Number of levels, or `None` for all remaining levels.
    pub levels: Option<u32>,
}

impl Stage {
    pub fn new(k: u32, levels: u32) -> Self {
        Stage { k, levels: Some(levels) }
    }

    pub fn remaining(k: u32) -> Self {
        Stage { k, levels: None }
    }
}

/// How leaf submatrices are stored when a vocabulary is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VocabEncoding {
    /// Every distinct leaf as `k_L * k_L` raw bits.
    Plain,
    /// Column bitmap plus one row index per column (unset columns store 0).
    ColsFull,
    /// Column bitmap plus one row index per set column, located by rank.
    ColsRank,
}

impl VocabEncoding {
    pub fn name(self) -> &'static str {
        match self {
            VocabEncoding::Plain => "plain",
            VocabEncoding::ColsFull => "cols-full",
            VocabEncoding::ColsRank => "cols-rank",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            VocabEncoding::Plain => 1,
            VocabEncoding::ColsFull => 2,
            VocabEncoding::ColsRank => 3,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            1 => Ok(VocabEncoding::Plain),
            2 => Ok(VocabEncoding::ColsFull),
            3 => Ok(VocabEncoding::ColsRank),
            t => Err(Error::Format(format!("unknown vocabulary encoding tag {t}"))),
        }
    }
}

/// Shape parameters of a k²-tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K2Config {
    /// Branching stages from the root down. The last stage must be open-ended.
    pub stages: Vec<Stage>,
    /// Side of vocabulary leaves; 1 disables the vocabulary.
    pub leaf_size: u32,
    pub vocab_encoding: VocabEncoding,
    pub sample: SamplePreset,
}

impl Default for K2Config {
    /// k = 4 for the first five levels, k = 2 below, 8x8 leaves with the
    /// column encoding, 5% rank sampling.
    fn default() -> Self {
        K2Config {
            stages: vec![Stage::new(4, 5), Stage::remaining(2)],
            leaf_size: 8,
            vocab_encoding: VocabEncoding::ColsFull,
            sample: SamplePreset::Default,
        }
    }
}

impl K2Config {
    /// Uniform `k` at every level, no vocabulary.
    pub fn uniform(k: u32) -> Self {
        K2Config {
            stages: vec![Stage::remaining(k)],
            leaf_size: 1,
            vocab_encoding: VocabEncoding::Plain,
            sample: SamplePreset::Default,
        }
    }

    pub fn with_vocabulary(mut self, leaf_size: u32, encoding: VocabEncoding) -> Self {
        self.leaf_size = leaf_size;
        self.vocab_encoding = encoding;
        self
    }

    pub fn with_sample(mut self, sample: SamplePreset) -> Self {
        self.sample = sample;
        self
    }

    pub fn has_vocabulary(&self) -> bool {
        self.leaf_size > 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Config("at least one stage is required".into()));
        }
        for (i, st) in self.stages.iter().enumerate() {
            if st.k < 2 {
                return Err(Error::Config(format!("stage {i}: k = {} must be at least 2", st.k)));
            }
            match st.levels {
                Some(0) => return Err(Error::Config(format!("stage {i}: zero levels"))),
                None if i + 1 != self.stages.len() => {
                    return Err(Error::Config(format!("stage {i}: only the last stage may be open-ended")))
                }
                Some(_) if i + 1 == self.stages.len() => {
                    return Err(Error::Config("the last stage must be open-ended".into()))
                }
                _ => {}
            }
        }
        if self.leaf_size == 0 || !self.leaf_size.is_power_of_two() {
            return Err(Error::Config(format!("leaf size {} is not a power of two", self.leaf_size)));
        }
        Ok(())
    }

    /// Per-level branching factors from the root down, for a matrix whose
    /// larger dimension is `dim`. Stages are filled greedily in order until
    /// `product(k) * leaf_size >= dim`; there is always at least one level.
    pub fn level_arities(&self, dim: u64) -> Vec<u32> {
        let mut arities = Vec::new();
        let mut side = self.leaf_size as u128;
        let target = dim.max(1) as u128;
        for st in &self.stages {
            let mut used = 0;
            while (side < target || arities.is_empty()) && st.levels.is_none_or(|l| used < l) {
                arities.push(st.k);
                side *= st.k as u128;
                used += 1;
            }
        }
        arities
    }

    pub(crate) fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u32(w, self.stages.len() as u32)?;
        for st in &self.stages {
            n += write_u32(w, st.k)?;
            n += write_u32(w, st.levels.unwrap_or(u32::MAX))?;
        }
        n += write_u32(w, self.leaf_size)?;
        n += write_u8(w, self.vocab_encoding.tag())?;
        n += write_u8(w, self.sample.tag())?;
        Ok(n)
    }

    pub(crate) fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let n = read_u32(r)?;
        if n == 0 || n > 64 {
            return Err(Error::Format(format!("stage count {n}")));
        }
        let mut stages = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let k = read_u32(r)?;
            let levels = read_u32(r)?;
            stages.push(Stage {
                k,
                levels: (levels != u32::MAX).then_some(levels),
            });
        }
        let leaf_size = read_u32(r)?;
        let vocab_encoding = VocabEncoding::from_tag(read_u8(r)?)?;
        let sample = SamplePreset::from_tag(read_u8(r)?)?;
        let cfg = K2Config {
            stages,
            leaf_size,
            vocab_encoding,
            sample,
        };
        cfg.validate().map_err(|e| Error::Format(e.to_string()))?;
        Ok(cfg)
    }
}
