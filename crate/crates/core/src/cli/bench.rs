use std::collections::BTreeMap;
use std::hint::black_box;
use std::io::Write;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::store::Store;
use crate::triple::{Shape, TriplePattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    /// Each shape's query set runs at least this many times...
    pub min_reps: usize,
    /// ...and for at least this long.
    pub min_time: Duration,
    /// Include decoding every result through the dictionary.
    pub decode: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            min_reps: 3,
            min_time: Duration::from_millis(200),
            decode: false,
        }
    }
}

/// Timings for all queries of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub shape: Shape,
    pub queries: usize,
    /// Results of one pass over the queries.
    pub results: u64,
    pub reps: usize,
    pub total: Duration,
    pub mean_us_per_query: f64,
    /// NaN when the queries have no results.
    pub mean_us_per_result: f64,
}

pub const BENCH_HEADER: &str = "family\tshape\tqueries\tresults\treps\tus_per_query\tus_per_result";

/// Groups queries by shape and times each group. Rows come out by family,
/// then shape.
pub fn bench(store: &Store, patterns: &[TriplePattern], opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    let mut groups: BTreeMap<(u8, Shape), Vec<TriplePattern>> = BTreeMap::new();
    for p in patterns {
        groups.entry((family_rank(p.shape()), p.shape())).or_default().push(*p);
    }
    let mut rows = Vec::with_capacity(groups.len());
    for ((_, shape), group) in groups {
        let mut results = 0u64;
        for p in &group {
            results += run_one(store, p, opts.decode)? as u64;
        }
        let mut reps = 0;
        let start = Instant::now();
        while reps < opts.min_reps.max(1) || start.elapsed() < opts.min_time {
            for p in &group {
                black_box(run_one(store, p, opts.decode)?);
            }
            reps += 1;
        }
        let total = start.elapsed();
        let us = total.as_secs_f64() * 1e6;
        rows.push(BenchRow {
            shape,
            queries: group.len(),
            results,
            reps,
            total,
            mean_us_per_query: us / (reps * group.len()) as f64,
            mean_us_per_result: if results == 0 {
                f64::NAN
            } else {
                us / (reps as f64 * results as f64)
            },
        });
    }
    Ok(rows)
}

fn family_rank(shape: Shape) -> u8 {
    match shape.family() {
        "bound-predicate" => 0,
        "unbound-predicate" => 1,
        _ => 2,
    }
}

fn run_one(store: &Store, p: &TriplePattern, decode: bool) -> Result<usize> {
    let results = store.query(p)?;
    if decode && store.has_dictionary() {
        for t in &results {
            black_box(store.decode(t)?);
        }
    }
    Ok(results.len())
}

/// Tab-separated report, one row per shape.
pub fn write_bench_report(rows: &[BenchRow], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    for r in rows {
        let per_result = if r.mean_us_per_result.is_nan() {
            "NA".to_string()
        } else {
            format!("{:.4}", r.mean_us_per_result)
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            r.shape.family(),
            r.shape.label(),
            r.queries,
            r.results,
            r.reps,
            r.mean_us_per_query,
            per_result
        )?;
    }
    Ok(())
}
