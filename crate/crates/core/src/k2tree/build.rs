//! Level-order construction from a point set.
//!
//! Each point gets a mixed-radix key whose digits are its child index at
//! every level (`(row_block % k) * k + col_block % k`), followed by its cell
//! index inside the leaf when a vocabulary is used. Sorting the keys puts the
//! points in level order at every depth at once, so each level is emitted by
//! one pass over the distinct key prefixes of that depth.

use std::collections::HashMap;

use super::config::K2Config;
use super::vocab::{leaf_words, LeafBits, LeafVocabulary};
use super::{K2Tree, Layout, Leaves};
use crate::bitvector::{BitVector, RawBits};
use crate::dac::Dac;
use crate::error::{Error, Result};

/// Chunk width of the DAC holding leaf ids.
pub const LEAF_ID_CHUNK_BITS: u32 = 8;

pub(super) fn build(points: &[(u64, u64)], n_rows: u64, n_cols: u64, config: &K2Config) -> Result<K2Tree> {
    config.validate()?;
    for &(r, c) in points {
        if r >= n_rows || c >= n_cols {
            return Err(Error::OutOfRange {
                what: if r >= n_rows { "row" } else { "column" },
                value: if r >= n_rows { r } else { c },
                limit: if r >= n_rows { n_rows } else { n_cols },
            });
        }
    }
    let arities = config.level_arities(n_rows.max(n_cols));
    let layout = Layout::new(arities, config.leaf_size);
    let h = layout.arities.len();
    let vocab = config.has_vocabulary();
    let kl = config.leaf_size as u64;
    let rate = config.sample.sample_rate();

    let mut keys: Vec<u128> = points
        .iter()
        .map(|&(r, c)| {
            let mut key = 0u128;
            for (l, &k) in layout.arities.iter().enumerate() {
                let s = layout.sub_sides[l];
                let k = k as u64;
                let digit = ((r / s) % k) * k + (c / s) % k;
                key = key * (k * k) as u128 + digit as u128;
            }
            if vocab {
                key = key * (kl * kl) as u128 + ((r % kl) * kl + c % kl) as u128;
            }
            key
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();

    // prefixes[l] = sorted distinct node ids at level l (digits 0..=l)
    let mut prefixes: Vec<Vec<u128>> = vec![Vec::new(); h];
    let leaf_radix = if vocab { (kl * kl) as u128 } else { 1 };
    let mut deepest: Vec<u128> = keys.iter().map(|&k| k / leaf_radix).collect();
    deepest.dedup();
    prefixes[h - 1] = deepest;
    for l in (0..h - 1).rev() {
        let radix = layout.children_per_node(l + 1) as u128;
        let mut up: Vec<u128> = prefixes[l + 1].iter().map(|&p| p / radix).collect();
        up.dedup();
        prefixes[l] = up;
    }

    let mut t = RawBits::new();
    let mut last = RawBits::new();
    for (l, nodes) in prefixes.iter().enumerate() {
        let radix = layout.children_per_node(l) as u128;
        let out = if !vocab && l == h - 1 { &mut last } else { &mut t };
        if l == 0 {
            // the root always has its children written, even when empty
            out.extend_zeros(radix as usize);
        }
        let mut parent: Option<u128> = None;
        let mut block = out.len();
        for &node in nodes {
            let p = node / radix;
            if parent != Some(p) {
                if l > 0 {
                    block = out.len();
                    out.extend_zeros(radix as usize);
                } else {
                    block = 0;
                }
                parent = Some(p);
            }
            out.set(block + (node % radix) as usize);
        }
    }

    let n_points = keys.len() as u64;
    let leaves = if vocab {
        let cells = (kl * kl) as usize;
        let words = leaf_words(config.leaf_size);
        // leaf matrices in level order
        let mut leaf_seq: Vec<LeafBits> = Vec::with_capacity(prefixes[h - 1].len());
        let mut current: Option<u128> = None;
        for &key in &keys {
            let node = key / leaf_radix;
            if current != Some(node) {
                leaf_seq.push(vec![0u64; words]);
                current = Some(node);
            }
            let cell = (key % leaf_radix) as usize;
            debug_assert!(cell < cells);
            leaf_seq.last_mut().expect("pushed above")[cell / 64] |= 1 << (cell % 64);
        }
        let (entries, ids) = rank_by_frequency(leaf_seq);
        let vocab = LeafVocabulary::build(&entries, config.leaf_size, config.vocab_encoding, rate)?;
        let ids = Dac::encode(&ids, LEAF_ID_CHUNK_BITS, rate)?;
        Leaves::Vocab { ids, vocab }
    } else {
        Leaves::Bits(BitVector::from_raw(last, rate))
    };

    K2Tree::assemble(config.clone(), n_rows, n_cols, layout, BitVector::from_raw(t, rate), leaves, n_points)
}

/// Deduplicates leaf matrices and numbers them by descending frequency, ties
/// broken by first appearance. Returns the entries in id order and the id of
/// every leaf in input order.
fn rank_by_frequency(leaves: Vec<LeafBits>) -> (Vec<LeafBits>, Vec<u64>) {
    let mut first_seen: HashMap<&LeafBits, (usize, usize)> = HashMap::new();
    let mut distinct: Vec<&LeafBits> = Vec::new();
    for leaf in &leaves {
        let slot = first_seen.entry(leaf).or_insert_with(|| {
            distinct.push(leaf);
            (distinct.len() - 1, 0)
        });
        slot.1 += 1;
    }
    let mut order: Vec<usize> = (0..distinct.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(first_seen[distinct[i]].1), i));
    let mut id_of_first = vec![0u64; distinct.len()];
    for (id, &i) in order.iter().enumerate() {
        id_of_first[i] = id as u64;
    }
    let ids = leaves
        .iter()
        .map(|leaf| id_of_first[first_seen[leaf].0])
        .collect();
    let entries = order.iter().map(|&i| distinct[i].clone()).collect();
    (entries, ids)
}
