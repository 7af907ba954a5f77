//! Synthetic id datasets and query workloads.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Zipf};

use crate::store::Dims;
use crate::triple::{IdTriple, Shape, TriplePattern};

/// Parameters of a Zipf-skewed random dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfSpec {
    /// Distinct triples to generate.
    pub triples: usize,
    pub subjects: u32,
    pub predicates: u32,
    pub objects: u32,
    pub exponent: f64,
}

/// Subjects and objects follow a Zipf law, predicates are uniform. Ids are
/// shuffled so popular terms are not all small numbers. Returns distinct
/// triples; `spec.triples` must not exceed the number of possible ones.
pub fn zipf_dataset<R: Rng>(rng: &mut R, spec: &ZipfSpec) -> (Vec<IdTriple>, Dims) {
    let capacity = spec.subjects as u128 * spec.predicates as u128 * spec.objects as u128;
    assert!(spec.triples as u128 <= capacity / 2, "too many triples for the id space");
    let zs = Zipf::new(spec.subjects as u64, spec.exponent).expect("valid zipf");
    let zo = Zipf::new(spec.objects as u64, spec.exponent).expect("valid zipf");
    let mut smap: Vec<u32> = (1..=spec.subjects).collect();
    let mut omap: Vec<u32> = (1..=spec.objects).collect();
    smap.shuffle(rng);
    omap.shuffle(rng);
    let mut seen = HashSet::with_capacity(spec.triples);
    let mut out = Vec::with_capacity(spec.triples);
    while out.len() < spec.triples {
        let s = smap[zs.sample(rng) as usize - 1];
        let o = omap[zo.sample(rng) as usize - 1];
        let p = rng.gen_range(1..=spec.predicates);
        let t = IdTriple::new(s, p, o);
        if seen.insert(t) {
            out.push(t);
        }
    }
    (out, Dims::new(spec.subjects, spec.predicates, spec.objects))
}

/// Parameters of a clustered dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpec {
    pub triples: usize,
    pub predicates: u32,
    pub clusters: u32,
    /// Consecutive subject ids per cluster.
    pub subjects_per_cluster: u32,
    /// Consecutive object ids per cluster.
    pub objects_per_cluster: u32,
    /// Distinct predicates a cluster uses.
    pub palette: usize,
}

impl ClusterSpec {
    /// One million triples over 1000 predicates.
    pub fn million() -> Self {
        ClusterSpec {
            triples: 1_000_000,
            predicates: 1000,
            clusters: 5000,
            subjects_per_cluster: 40,
            objects_per_cluster: 60,
            palette: 8,
        }
    }
}

/// Triples grouped into clusters of neighbouring subject and object ids,
/// like entities of one source described with a shared vocabulary. Cluster
/// popularity and predicate choice are Zipf-skewed.
pub fn clustered_dataset<R: Rng>(rng: &mut R, spec: &ClusterSpec) -> (Vec<IdTriple>, Dims) {
    let per_cluster = spec.subjects_per_cluster as u128 * spec.palette as u128 * spec.objects_per_cluster as u128;
    assert!(
        (spec.triples as u128) <= per_cluster * spec.clusters as u128 / 4,
        "clusters too small for the requested size"
    );
    let zc = Zipf::new(spec.clusters as u64, 0.6).expect("valid zipf");
    let zp = Zipf::new(spec.predicates as u64, 1.0).expect("valid zipf");
    let zl = Zipf::new(spec.palette as u64, 1.0).expect("valid zipf");
    let palettes: Vec<Vec<u32>> = (0..spec.clusters)
        .map(|_| (0..spec.palette).map(|_| zp.sample(rng) as u32).collect())
        .collect();
    let mut seen = HashSet::with_capacity(spec.triples);
    let mut out = Vec::with_capacity(spec.triples);
    while out.len() < spec.triples {
        let c = zc.sample(rng) as u32 - 1;
        let s = c * spec.subjects_per_cluster + rng.gen_range(1..=spec.subjects_per_cluster);
        let p = palettes[c as usize][zl.sample(rng) as usize - 1];
        let o = c * spec.objects_per_cluster + rng.gen_range(1..=spec.objects_per_cluster);
        let t = IdTriple::new(s, p, o);
        if seen.insert(t) {
            out.push(t);
        }
    }
    let dims = Dims::new(
        spec.clusters * spec.subjects_per_cluster,
        spec.predicates,
        spec.clusters * spec.objects_per_cluster,
    );
    (out, dims)
}

/// Patterns of `shape` whose bound parts come from stored triples, so every
/// pattern has at least one match.
pub fn sample_patterns<R: Rng>(rng: &mut R, triples: &[IdTriple], shape: Shape, count: usize) -> Vec<TriplePattern> {
    if triples.is_empty() {
        return Vec::new();
    }
    let (bs, bp, bo) = shape.bound();
    (0..count)
        .map(|_| {
            let t = triples[rng.gen_range(0..triples.len())];
            TriplePattern::new(bs.then_some(t.s), bp.then_some(t.p), bo.then_some(t.o))
        })
        .collect()
}

/// Patterns of `shape` with bound ids drawn uniformly from `dims`; many
/// have no match.
pub fn random_patterns<R: Rng>(rng: &mut R, dims: Dims, shape: Shape, count: usize) -> Vec<TriplePattern> {
    let (bs, bp, bo) = shape.bound();
    let mut pick = |bound: bool, max: u32| (bound && max > 0).then(|| rng.gen_range(1..=max));
    (0..count)
        .map(|_| {
            let s = pick(bs, dims.subjects);
            let p = pick(bp, dims.predicates);
            let o = pick(bo, dims.objects);
            TriplePattern::new(s, p, o)
        })
        .collect()
}
