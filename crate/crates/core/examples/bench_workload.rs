//! Times 500 sampled queries per pattern shape on a synthetic dataset and
//! prints the tab-separated report.
//!
//!     cargo run --release --example bench_workload [-- TRIPLES]

use std::time::Duration;

use bmatrix::cli::{bench, verify_ids, write_bench_report, BenchOptions, VerifyOptions};
use bmatrix::store::{BMatrix, Store, StoreConfig};
use bmatrix::synth::{clustered_dataset, sample_patterns, ClusterSpec};
use bmatrix::triple::Shape;
use rand::{rngs::StdRng, SeedableRng};

fn main() -> bmatrix::Result<()> {
    let triples = std::env::args().nth(1).map_or(200_000, |n| n.parse().expect("triple count"));
    let spec = ClusterSpec {
        triples,
        clusters: (triples / 200).max(10) as u32,
        ..ClusterSpec::million()
    };
    let mut rng = StdRng::seed_from_u64(42);
    let (data, dims) = clustered_dataset(&mut rng, &spec);
    let store = Store::from_ids(BMatrix::build(&data, dims, &StoreConfig::default())?);
    println!("{:?}", verify_ids(&store, &data, &VerifyOptions::default()));

    let patterns: Vec<_> = Shape::ALL
        .into_iter()
        .filter(|&s| s != Shape::All)
        .flat_map(|s| sample_patterns(&mut rng, &data, s, 500))
        .collect();
    let opts = BenchOptions {
        min_reps: 3,
        min_time: Duration::from_millis(100),
        decode: false,
    };
    let rows = bench(&store, &patterns, &opts)?;
    write_bench_report(&rows, &mut std::io::stdout())?;
    Ok(())
}
