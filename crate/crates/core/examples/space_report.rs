//! Builds the clustered one-million-triple dataset and prints where the
//! bytes go, for both sampling presets.
//!
//!     cargo run --release --example space_report [-- TRIPLES]

use std::time::Instant;

use bmatrix::bitvector::SamplePreset;
use bmatrix::k2tree::K2Config;
use bmatrix::store::{BMatrix, Store, StoreConfig};
use bmatrix::synth::{clustered_dataset, ClusterSpec};
use rand::{rngs::StdRng, SeedableRng};

fn main() -> bmatrix::Result<()> {
    let mut spec = ClusterSpec::million();
    if let Some(n) = std::env::args().nth(1) {
        spec.triples = n.parse().expect("triple count");
    }
    let (triples, dims) = clustered_dataset(&mut StdRng::seed_from_u64(6), &spec);
    println!("{} triples, {} subjects, {} predicates, {} objects", triples.len(), dims.subjects, dims.predicates, dims.objects);
    for preset in [SamplePreset::Default, SamplePreset::Dense] {
        let config = StoreConfig {
            tree: K2Config::default().with_sample(preset),
            ..StoreConfig::default()
        };
        let start = Instant::now();
        let store = Store::from_ids(BMatrix::build(&triples, dims, &config)?);
        let built = start.elapsed();
        let sp = store.space();
        let per = |b: usize| b as f64 / triples.len() as f64;
        println!("{preset:?} sampling, built in {built:.2?}");
        println!("  ST         {:>10} B  {:.3} B/triple", sp.st, per(sp.st));
        println!("  OT         {:>10} B  {:.3} B/triple", sp.ot, per(sp.ot));
        println!("  predicates {:>10} B  {:.3} B/triple", sp.predicate_index, per(sp.predicate_index));
        println!("  total      {:>10} B  {:.3} B/triple", sp.structure(), per(sp.structure()));
        let mem = sp.st_memory.total() + sp.ot_memory.total();
        println!("  in memory (trees, with rank samples) {mem} B  {:.3} B/triple", per(mem));
    }
    Ok(())
}
