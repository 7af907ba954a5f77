//! Building blocks of the `bmatrix` command-line tool: pattern syntax,
//! building from N-Triples, querying, statistics, benchmarking and
//! verification.

mod bench;
mod build;
mod pattern;
mod query;
mod verify;

pub use bench::{bench, write_bench_report, BenchOptions, BenchRow, BENCH_HEADER};
pub use build::{build_store, parse_sample, parse_thresholds, parse_vocab, BuildOptions, BuildReport, TreeOptions};
pub use pattern::{read_patterns, PatternSpec, Resolved};
pub use query::{run_query, write_stats, QueryOptions, QueryOutcome};
pub use verify::{verify, verify_ids, Mismatch, VerifyOptions, VerifyOutcome};

/// Exit status for a failed verification.
pub const EXIT_MISMATCH: i32 = 2;
/// Exit status for any other error.
pub const EXIT_ERROR: i32 = 1;
