//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//!     cargo test --release --test acceptance

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};

use bmatrix::bitvector::{BitVector, SamplePreset};
use bmatrix::cli::{self, BenchOptions, BENCH_HEADER};
use bmatrix::dac::Dac;
use bmatrix::k2tree::{K2Config, K2Tree, Stage, VocabEncoding};
use bmatrix::oracle::TripleList;
use bmatrix::store::{BMatrix, Dims, Store, StoreConfig, Thresholds};
use bmatrix::synth::{clustered_dataset, random_patterns, sample_patterns, zipf_dataset, ClusterSpec, ZipfSpec};
use bmatrix::triple::{IdTriple, Shape, TriplePattern};

/// Criterion 1: generated datasets and probes per shape.
const DATASETS: usize = 51;
const PROBES_PER_SHAPE: usize = 200;
/// Criterion 2: bit vector probes.
const BITVECTOR_PROBES: usize = 100_000;
/// Criterion 3: largest matrix side checked exhaustively.
const NAV_MAX_SIDE: u64 = 64;
/// Criterion 6: bytes per triple of ST + OT + predicate index.
const SPACE_LIMIT_BYTES_PER_TRIPLE: f64 = 12.0;
/// Criterion 7: alternating timing trials per preset (the minimum is kept)
/// and the allowed excess of dense over default time per result.
const TIMING_TRIALS: usize = 3;
const TIMING_TOLERANCE: f64 = 0.0;
/// Criteria 7 and 8: queries per shape.
const BENCH_QUERIES: usize = 500;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn example() -> (Vec<IdTriple>, Dims) {
    let e = [(1, 1, 1), (2, 1, 2), (1, 2, 2), (2, 2, 1)];
    (e.iter().map(|&(s, p, o)| IdTriple::new(s, p, o)).collect(), Dims::new(2, 2, 2))
}

fn generated_datasets() -> Vec<(Vec<IdTriple>, Dims)> {
    let mut rng = StdRng::seed_from_u64(1001);
    let predicate_counts = [5u32, 100, 1000];
    (0..DATASETS)
        .map(|i| {
            let n = (1000.0 * 50f64.powf(rng.gen_range(0.0..=1.0))) as usize;
            let n = if i == 0 { 1000 } else if i == 1 { 50_000 } else { n };
            let spec = ZipfSpec {
                triples: n,
                subjects: (n as u32 / 5).max(50),
                predicates: predicate_counts[i % 3],
                objects: (n as u32 / 3).max(50),
                exponent: rng.gen_range(0.8..1.3),
            };
            zipf_dataset(&mut rng, &spec)
        })
        .collect()
}

/// Bound values half from stored triples, half uniform over the id ranges.
/// The full scan has a single pattern.
fn probes(rng: &mut StdRng, triples: &[IdTriple], dims: Dims, shape: Shape) -> Vec<TriplePattern> {
    if shape == Shape::All {
        return vec![TriplePattern::default()];
    }
    let hits = PROBES_PER_SHAPE / 2;
    let mut ps = sample_patterns(rng, triples, shape, hits);
    ps.extend(random_patterns(rng, dims, shape, PROBES_PER_SHAPE - hits));
    ps
}

fn criterion_1(datasets: &[(Vec<IdTriple>, Dims)]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut all = vec![example()];
    all.extend(datasets.iter().cloned());
    let (mut checked, mut mismatches) = (0usize, 0usize);
    let mut first = None;
    for (triples, dims) in &all {
        let m = BMatrix::build(triples, *dims, &StoreConfig::default()).expect("build");
        let oracle = TripleList::new(triples);
        for shape in Shape::ALL {
            for p in probes(&mut rng, triples, *dims, shape) {
                checked += 1;
                if m.query(&p).ok() != Some(oracle.query(&p)) {
                    mismatches += 1;
                    first.get_or_insert(format!("{} on {} triples", p, triples.len()));
                }
            }
        }
    }
    let sizes: Vec<usize> = datasets.iter().map(|d| d.0.len()).collect();
    outcome(
        mismatches == 0,
        format!(
            "{} datasets ({}..{} triples) + example, {checked} probes, {mismatches} mismatches{}",
            datasets.len(),
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap(),
            first.map_or(String::new(), |f| format!(", first: {f}"))
        ),
    )
}

fn naive_rank(bits: &[bool], i: usize) -> usize {
    bits[..=i].iter().filter(|&&b| b).count()
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut failures = Vec::new();

    // bit vectors against prefix counts and position lists
    let mut bv_probes = 0;
    for (len, density, preset) in [
        (200_000usize, 0.5, SamplePreset::Default),
        (150_000, 0.02, SamplePreset::Dense),
        (70_001, 0.97, SamplePreset::Default),
    ] {
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
        let bv = BitVector::from_bits(bits.iter().copied(), preset.sample_rate());
        let mut prefix = vec![0usize; len + 1];
        for i in 0..len {
            prefix[i + 1] = prefix[i] + bits[i] as usize;
        }
        let ones: Vec<usize> = (0..len).filter(|&i| bits[i]).collect();
        let zeros: Vec<usize> = (0..len).filter(|&i| !bits[i]).collect();
        for _ in 0..BITVECTOR_PROBES / 3 + 1 {
            let i = rng.gen_range(0..len);
            bv_probes += 1;
            let ok = bv.access(i) == Some(bits[i])
                && bv.rank1(i) == Some(prefix[i + 1])
                && bv.rank0(i) == Some(i + 1 - prefix[i + 1])
                && (ones.is_empty() || {
                    let j = rng.gen_range(1..=ones.len());
                    bv.select1(j) == Some(ones[j - 1])
                })
                && (zeros.is_empty() || {
                    let j = rng.gen_range(1..=zeros.len());
                    bv.select0(j) == Some(zeros[j - 1])
                });
            if !ok {
                failures.push(format!("bitvector len {len} position {i}"));
                break;
            }
        }
        // spot check the prefix oracle itself on a short window
        let i = len / 3;
        assert_eq!(prefix[i + 1], naive_rank(&bits, i));
    }

    // DAC round trips
    let mut dac_values = 0;
    for (chunk, max) in [(2u32, 1000u64), (4, 1 << 20), (8, u64::MAX), (3, 7)] {
        let values: Vec<u64> = (0..20_000)
            .map(|_| if rng.gen_bool(0.7) { rng.gen_range(0..16) } else { rng.gen_range(0..=max) })
            .collect();
        let dac = Dac::encode(&values, chunk, SamplePreset::Default.sample_rate()).expect("encode");
        dac_values += values.len();
        if dac.iter().collect::<Vec<_>>() != values || (0..values.len()).any(|i| dac.get(i) != values[i]) {
            failures.push(format!("dac chunk {chunk}"));
        }
    }

    // k²-trees against dense matrices
    let configs = [
        K2Config::uniform(2),
        K2Config::uniform(4),
        K2Config::default().with_vocabulary(8, VocabEncoding::Plain),
        K2Config::default().with_vocabulary(4, VocabEncoding::Plain),
        K2Config::uniform(2).with_vocabulary(2, VocabEncoding::Plain),
    ];
    let mut matrices = 0;
    for side in [16u64, 37, 64, 128, 255, 512] {
        for cfg in &configs {
            matrices += 1;
            let density = rng.gen_range(0.001..0.05);
            let mut dense = vec![false; (side * side) as usize];
            let mut pts = Vec::new();
            for r in 0..side {
                for c in 0..side {
                    if rng.gen_bool(density) {
                        dense[(r * side + c) as usize] = true;
                        pts.push((r, c));
                    }
                }
            }
            let t = K2Tree::build(&pts, side, side, cfg).expect("build");
            let get = |r: u64, c: u64| dense[(r * side + c) as usize];
            let cells_ok = (0..side).all(|r| (0..side).all(|c| t.cell(r, c).unwrap() == get(r, c)));
            let rows_ok = (0..side).all(|r| t.row(r, 0, side - 1, None).unwrap() == (0..side).filter(|&c| get(r, c)).collect::<Vec<_>>());
            let cols_ok = (0..side).all(|c| t.col(c, None).unwrap() == (0..side).filter(|&r| get(r, c)).collect::<Vec<_>>());
            let ranges_ok = (0..50).all(|_| {
                let (r1, c1) = (rng.gen_range(0..side), rng.gen_range(0..side));
                let (r2, c2) = (rng.gen_range(r1..side), rng.gen_range(c1..side));
                let got: BTreeSet<_> = t.range(r1, r2, c1, c2).unwrap().into_iter().collect();
                let want: BTreeSet<_> = (r1..=r2)
                    .flat_map(|r| (c1..=c2).map(move |c| (r, c)))
                    .filter(|&(r, c)| get(r, c))
                    .collect();
                got == want
            });
            if !(cells_ok && rows_ok && cols_ok && ranges_ok) {
                failures.push(format!("k2tree side {side} config {cfg:?}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{bv_probes} bitvector probes, {dac_values} DAC values, {matrices} matrices (16..512 side); failures: {}",
            if failures.is_empty() { "none".into() } else { failures.join("; ") }
        ),
    )
}

/// Walks every set bit from the root and compares each child bit with the
/// occupancy of the block it stands for.
fn check_navigation(t: &K2Tree, occupied: &dyn Fn(u64, u64, u64) -> bool) -> (usize, Vec<String>) {
    let mut internal = 0;
    let mut errors = Vec::new();
    let mut stack = vec![(0usize, 0usize, 0u64, 0u64)];
    while let Some((level, base, r0, c0)) = stack.pop() {
        let k = t.arity(level) as u64;
        let sub = t.block_side(level);
        for j in 0..k * k {
            let pos = base + j as usize;
            let (r, c) = (r0 + (j / k) * sub, c0 + (j % k) * sub);
            let bit = t.bit(pos);
            if bit != occupied(r, c, sub) {
                errors.push(format!("level {level} position {pos}"));
            }
            if bit && level + 1 < t.num_levels() {
                internal += 1;
                match t.children_base(pos) {
                    Some(child) => stack.push((level + 1, child, r, c)),
                    None => errors.push(format!("no children for set bit {pos}")),
                }
            }
        }
    }
    (internal, errors)
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let configs = [
        K2Config::uniform(2),
        K2Config::uniform(3),
        K2Config {
            stages: vec![Stage::new(4, 1), Stage::remaining(2)],
            ..K2Config::uniform(2)
        },
        K2Config::default().with_vocabulary(8, VocabEncoding::Plain),
        K2Config::uniform(2).with_vocabulary(4, VocabEncoding::Plain),
    ];
    let (mut trees, mut internal) = (0, 0);
    let mut errors = Vec::new();
    for _ in 0..40 {
        let rows = rng.gen_range(1..=NAV_MAX_SIDE);
        let cols = rng.gen_range(1..=NAV_MAX_SIDE);
        let density = rng.gen_range(0.0..0.2);
        let pts: Vec<(u64, u64)> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let set: HashSet<(u64, u64)> = pts.iter().copied().collect();
        let occupied = |r: u64, c: u64, side: u64| {
            (r..(r + side).min(rows)).any(|i| (c..(c + side).min(cols)).any(|j| set.contains(&(i, j))))
        };
        for cfg in &configs {
            let t = K2Tree::build(&pts, rows, cols, cfg).expect("build");
            trees += 1;
            let (n, errs) = check_navigation(&t, &occupied);
            internal += n;
            errors.extend(errs.into_iter().map(|e| format!("{rows}x{cols}: {e}")));
        }
    }
    outcome(
        errors.is_empty(),
        format!(
            "{trees} trees up to {NAV_MAX_SIDE} side, {internal} internal set bits checked, {} violations{}",
            errors.len(),
            errors.first().map_or(String::new(), |e| format!(", first: {e}"))
        ),
    )
}

/// Distinct non-empty leaf submatrices, computed from the points alone.
fn distinct_leaves(points: &[(u64, u64)], leaf: u64) -> usize {
    let mut leaves: BTreeMap<(u64, u64), BTreeSet<(u64, u64)>> = BTreeMap::new();
    for &(r, c) in points {
        leaves.entry((r / leaf, c / leaf)).or_default().insert((r % leaf, c % leaf));
    }
    leaves.into_values().collect::<HashSet<_>>().len()
}

fn criterion_4(datasets: &[(Vec<IdTriple>, Dims)]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let encodings = [VocabEncoding::Plain, VocabEncoding::ColsFull, VocabEncoding::ColsRank];
    let (mut compared, mut differing, mut size_checks, mut size_errors) = (0, 0, 0, 0);
    let mut notes = Vec::new();
    for (triples, dims) in datasets.iter().step_by(5) {
        let mut sorted = triples.clone();
        sorted.sort_unstable_by_key(IdTriple::pos_key);
        for kl in [2u32, 4, 8] {
            let stores: Vec<BMatrix> = encodings
                .iter()
                .map(|&enc| {
                    let cfg = StoreConfig {
                        tree: K2Config::default().with_vocabulary(kl, enc),
                        ..StoreConfig::default()
                    };
                    BMatrix::build(triples, *dims, &cfg).expect("build")
                })
                .collect();
            for shape in Shape::ALL {
                for p in probes(&mut rng, triples, *dims, shape).into_iter().take(50) {
                    compared += 1;
                    let first = stores[0].query(&p).unwrap();
                    if stores[1..].iter().any(|s| s.query(&p).unwrap() != first) {
                        differing += 1;
                    }
                }
            }
            let full = &stores[1];
            let st_points: Vec<(u64, u64)> = sorted.iter().enumerate().map(|(i, t)| (t.s as u64 - 1, i as u64)).collect();
            let ot_points: Vec<(u64, u64)> = sorted.iter().enumerate().map(|(i, t)| (t.o as u64 - 1, i as u64)).collect();
            for (tree, points) in [(full.subject_matrix(), &st_points), (full.object_matrix(), &ot_points)] {
                size_checks += 1;
                let vocab = tree.vocabulary().expect("vocabulary");
                let m = distinct_leaves(points, kl as u64);
                let want = m * kl as usize * (1 + kl.trailing_zeros() as usize);
                if vocab.len() != m || vocab.payload_bits() != want {
                    size_errors += 1;
                    notes.push(format!("k_L {kl}: m {} vs {m}, bits {} vs {want}", vocab.len(), vocab.payload_bits()));
                }
            }
        }
    }
    outcome(
        differing == 0 && size_errors == 0,
        format!(
            "{compared} patterns compared across 3 encodings: {differing} differ; {size_checks} COLS_FULL payloads vs m*k_L*(1+log2 k_L): {size_errors} wrong{}",
            notes.first().map_or(String::new(), |n| format!(" ({n})"))
        ),
    )
}

fn criterion_5(datasets: &[(Vec<IdTriple>, Dims)]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let (mut compared, mut differing) = (0, 0);
    for (triples, dims) in datasets {
        let mut m = BMatrix::build(triples, *dims, &StoreConfig::default()).expect("build");
        let so: Vec<(u32, u32)> = sample_patterns(&mut rng, triples, Shape::So, PROBES_PER_SHAPE / 2)
            .into_iter()
            .chain(random_patterns(&mut rng, *dims, Shape::So, PROBES_PER_SHAPE / 2))
            .map(|p| (p.s.unwrap(), p.o.unwrap()))
            .collect();
        let mut reference: Option<(Vec<BTreeSet<u32>>, Vec<BTreeSet<(u32, u32)>>)> = None;
        for th in [0, 1, 10, triples.len()] {
            m.set_thresholds(Thresholds {
                merge_sorted: th,
                merge_unsorted: th,
            });
            let so_sets: Vec<BTreeSet<u32>> = so.iter().map(|&(s, o)| m.predicates(s, o).unwrap().into_iter().collect()).collect();
            let p_sets: Vec<BTreeSet<(u32, u32)>> = (1..=dims.predicates)
                .map(|p| m.subject_objects(p).unwrap().into_iter().collect())
                .collect();
            compared += so_sets.len() + p_sets.len();
            match &reference {
                None => reference = Some((so_sets, p_sets)),
                Some((rs, rp)) => {
                    differing += rs.iter().zip(&so_sets).filter(|(a, b)| a != b).count();
                    differing += rp.iter().zip(&p_sets).filter(|(a, b)| a != b).count();
                }
            }
        }
    }
    outcome(
        differing == 0,
        format!(
            "{} datasets, thresholds {{0,1,10,n}}, {compared} (s,?,o)/(?,p,?) results compared: {differing} differ",
            datasets.len()
        ),
    )
}

fn build_clustered(triples: &[IdTriple], dims: Dims, preset: SamplePreset) -> Store {
    let cfg = StoreConfig {
        tree: K2Config::default().with_sample(preset),
        ..StoreConfig::default()
    };
    Store::from_ids(BMatrix::build(triples, dims, &cfg).expect("build"))
}

fn criterion_6(triples: &[IdTriple], store: &Store) -> Outcome {
    let sp = store.space();
    let per = sp.structure() as f64 / triples.len() as f64;
    outcome(
        triples.len() == 1_000_000 && per < SPACE_LIMIT_BYTES_PER_TRIPLE,
        format!(
            "{} clustered triples, {} predicates: ST {} B + OT {} B + predicate index {} B = {per:.3} bytes/triple (limit < {SPACE_LIMIT_BYTES_PER_TRIPLE})",
            triples.len(),
            store.matrix().dims().predicates,
            sp.st,
            sp.ot,
            sp.predicate_index
        ),
    )
}

/// Time per result over all shapes except the full scan.
fn time_per_result(store: &Store, patterns: &[TriplePattern]) -> f64 {
    let opts = BenchOptions {
        min_reps: 1,
        min_time: Duration::ZERO,
        decode: false,
    };
    let rows = cli::bench(store, patterns, &opts).expect("bench");
    let total: f64 = rows.iter().map(|r| r.total.as_secs_f64()).sum();
    let results: f64 = rows.iter().map(|r| (r.results * r.reps as u64) as f64).sum();
    total * 1e6 / results
}

fn criterion_7(triples: &[IdTriple], default: &Store, dense: &Store) -> Outcome {
    let tree_bytes = |s: &Store| {
        let sp = s.space();
        sp.st_memory.total() + sp.ot_memory.total()
    };
    let (bd, bx) = (tree_bytes(default), tree_bytes(dense));
    let mut rng = StdRng::seed_from_u64(7);
    let patterns: Vec<TriplePattern> = Shape::ALL
        .into_iter()
        .filter(|&s| s != Shape::All)
        .flat_map(|s| sample_patterns(&mut rng, triples, s, BENCH_QUERIES))
        .collect();
    let (mut td, mut tx) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..TIMING_TRIALS {
        td = td.min(time_per_result(default, &patterns));
        tx = tx.min(time_per_result(dense, &patterns));
    }
    let larger = bx > bd;
    let faster = tx <= td * (1.0 + TIMING_TOLERANCE);
    outcome(
        larger && faster,
        format!(
            "trees with rank samples: default {bd} B, dense {bx} B ({:+.2}%); mean us/result (min of {TIMING_TRIALS}): default {td:.4}, dense {tx:.4}",
            (bx as f64 / bd as f64 - 1.0) * 100.0
        ),
    )
}

struct BenchTable {
    header: String,
    rows: Vec<Vec<String>>,
}

fn run_bench(exe: &str, store: &str, queries: &str) -> Result<BenchTable, String> {
    let out = Command::new(exe)
        .args(["bench", store, queries, "--min-reps", "3", "--min-time", "0.05"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default().to_string();
    let rows = lines.map(|l| l.split('\t').map(str::to_string).collect()).collect();
    Ok(BenchTable { header, rows })
}

fn criterion_8() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_bmatrix");
    let dir = tempfile::tempdir().expect("tempdir");
    let spec = ClusterSpec {
        triples: 100_000,
        clusters: 1000,
        ..ClusterSpec::million()
    };
    let (triples, dims) = clustered_dataset(&mut StdRng::seed_from_u64(8), &spec);
    let store_path = dir.path().join("bench.bmx");
    let queries = dir.path().join("queries.txt");
    Store::from_ids(BMatrix::build(&triples, dims, &StoreConfig::default()).expect("build"))
        .save(&store_path)
        .expect("save");
    let status = Command::new(exe)
        .arg("sample-queries")
        .arg(&store_path)
        .args(["--count", &BENCH_QUERIES.to_string(), "-o"])
        .arg(&queries)
        .status()
        .expect("sample-queries");
    if !status.success() {
        return outcome(false, "sample-queries failed");
    }
    let (s, q) = (store_path.to_str().unwrap(), queries.to_str().unwrap());
    let runs: Vec<BenchTable> = match (0..2).map(|_| run_bench(exe, s, q)).collect() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let mut problems = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        if run.header != BENCH_HEADER {
            problems.push(format!("run {i}: header {:?}", run.header));
        }
        if run.rows.len() != 7 {
            problems.push(format!("run {i}: {} rows", run.rows.len()));
        }
        for row in &run.rows {
            let per_result: f64 = row.get(6).and_then(|v| v.parse().ok()).unwrap_or(f64::NAN);
            let reps: usize = row.get(4).and_then(|v| v.parse().ok()).unwrap_or(0);
            if row.len() != 7 || row[2] != BENCH_QUERIES.to_string() || reps < 3 || !(per_result.is_finite() && per_result > 0.0) {
                problems.push(format!("run {i}: bad row {row:?}"));
            }
        }
    }
    // everything but the timings must repeat exactly
    let fixed = |t: &BenchTable| t.rows.iter().map(|r| r[..4].to_vec()).collect::<Vec<_>>();
    if fixed(&runs[0]) != fixed(&runs[1]) {
        problems.push("family/shape/queries/results differ between runs".into());
    }
    let shapes: Vec<String> = runs[0].rows.iter().map(|r| format!("{}={}", r[1], r[6])).collect();
    outcome(
        problems.is_empty(),
        format!(
            "2 runs over {} queries per shape, us/result: {}{}",
            BENCH_QUERIES,
            shapes.join(" "),
            problems.first().map_or(String::new(), |p| format!("; problem: {p}"))
        ),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |n: usize| filter.is_empty() || filter.iter().any(|f| f == &n.to_string());
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        if wanted(n) {
            let start = Instant::now();
            let o = f();
            let took = start.elapsed();
            println!(
                "criterion {n} [{}] {name}: {} ({took:.1?})",
                if o.pass { "PASS" } else { "FAIL" },
                o.detail
            );
            results.push((n, name, o, took));
        }
    };

    let datasets = if [1, 4, 5].into_iter().any(wanted) { generated_datasets() } else { Vec::new() };
    run(1, "oracle equivalence", &mut || criterion_1(&datasets));
    run(2, "succinct structure oracles", &mut criterion_2);
    run(3, "child navigation law", &mut criterion_3);
    run(4, "vocabulary equivalence and size", &mut || criterion_4(&datasets));
    run(5, "threshold invariance", &mut || criterion_5(&datasets));
    if wanted(6) || wanted(7) {
        let (triples, dims) = clustered_dataset(&mut StdRng::seed_from_u64(6), &ClusterSpec::million());
        let default = build_clustered(&triples, dims, SamplePreset::Default);
        run(6, "space at desk scale", &mut || criterion_6(&triples, &default));
        if wanted(7) {
            let dense = build_clustered(&triples, dims, SamplePreset::Dense);
            run(7, "sampling tradeoff direction", &mut || criterion_7(&triples, &default, &dense));
        }
    }
    run(8, "benchmark methodology", &mut criterion_8);

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() { String::new() } else { format!("; failed: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
