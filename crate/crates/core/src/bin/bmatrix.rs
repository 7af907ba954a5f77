use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::{rngs::StdRng, SeedableRng};

use bmatrix::cli::{self, BenchOptions, BuildOptions, PatternSpec, QueryOptions, QueryOutcome, Resolved, TreeOptions};
use bmatrix::dictionary::Role;
use bmatrix::ntriples::{self, PatternTerm};
use bmatrix::store::{Store, StoreConfig};
use bmatrix::synth::sample_patterns;
use bmatrix::triple::Shape;
use bmatrix::{Error, Result};

#[derive(Parser)]
#[command(name = "bmatrix", version, about = "Compact RDF triple store on two k2-tree matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a store from N-Triples files ("-" reads stdin).
    Build(BuildArgs),
    /// Match one triple pattern, e.g. `? <http://x/p> ?` or `#3 ? #1`.
    Query(QueryArgs),
    /// Compare a store with its source statements.
    Verify(VerifyArgs),
    /// Print counts and space per component.
    Stats { store: PathBuf },
    /// Time a file of patterns, one row per pattern shape.
    Bench(BenchArgs),
    /// Write a query file sampled from the stored triples.
    SampleQueries(SampleArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    /// Arity of the top levels.
    #[arg(long, default_value_t = 4)]
    k1: u32,
    /// Number of levels using --k1.
    #[arg(long, default_value_t = 5)]
    k1_levels: u32,
    /// Arity of the remaining levels.
    #[arg(long, default_value_t = 2)]
    k2: u32,
    /// Side of vocabulary leaves.
    #[arg(long, default_value_t = 8)]
    leaf: u32,
    /// plain, cols-full, cols-rank or off.
    #[arg(long, default_value = "cols-full")]
    vocab: String,
    /// default (5%) or dense (12.5%) rank sampling.
    #[arg(long, default_value = "default")]
    sample: String,
    /// Predicate sampling period.
    #[arg(long, default_value_t = 1024)]
    d: usize,
    /// Merge thresholds: N or SORTED,UNSORTED.
    #[arg(long, default_value = "10,10")]
    thresholds: String,
    /// Decompress inputs with gzip regardless of their suffix.
    #[arg(long)]
    gzip: bool,
    /// Stop at the first malformed line.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct QueryArgs {
    store: PathBuf,
    #[arg(required = true, num_args = 1..)]
    pattern: Vec<String>,
    /// Print numeric ids.
    #[arg(long)]
    ids: bool,
    /// Print only the number of matches.
    #[arg(long)]
    count_only: bool,
    /// Tab-separated output.
    #[arg(long)]
    tsv: bool,
    /// Override the stored merge thresholds.
    #[arg(long)]
    thresholds: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    store: PathBuf,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Patterns per shape.
    #[arg(long, default_value_t = 200)]
    sample: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    gzip: bool,
}

#[derive(Args)]
struct BenchArgs {
    store: PathBuf,
    queries: PathBuf,
    #[arg(long, default_value_t = 3)]
    min_reps: usize,
    /// Minimum seconds per shape.
    #[arg(long, default_value_t = 0.2)]
    min_time: f64,
    #[arg(long)]
    thresholds: Option<String>,
    /// Include decoding results through the dictionary.
    #[arg(long)]
    decode: bool,
}

#[derive(Args)]
struct SampleArgs {
    store: PathBuf,
    /// Comma-separated shapes: spo,sp,po,p,so,s,o,all.
    #[arg(long, default_value = "spo,sp,po,p,so,s,o")]
    shapes: String,
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write terms instead of `#id` numbers.
    #[arg(long)]
    terms: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::EXIT_ERROR as u8)
        }
    }
}

fn run(command: Command) -> Result<i32> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match command {
        Command::Build(a) => build(a, &mut out)?,
        Command::Query(a) => query(a, &mut out)?,
        Command::Verify(a) => verify(a, &mut out)?,
        Command::Stats { store } => {
            cli::write_stats(&Store::load(store)?, &mut out)?;
            0
        }
        Command::Bench(a) => bench(a, &mut out)?,
        Command::SampleQueries(a) => sample(a, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn build(a: BuildArgs, out: &mut dyn Write) -> Result<i32> {
    let tree = TreeOptions {
        k1: a.k1,
        k1_levels: a.k1_levels,
        k2: a.k2,
        leaf: a.leaf,
        vocab: cli::parse_vocab(&a.vocab)?,
        sample: cli::parse_sample(&a.sample)?,
    };
    let opts = BuildOptions {
        inputs: a.inputs,
        gzip: a.gzip,
        strict: a.strict,
        config: StoreConfig {
            tree: tree.to_config()?,
            sample_period: a.d,
            thresholds: cli::parse_thresholds(&a.thresholds)?,
        },
    };
    let (store, report) = cli::build_store(&opts, &mut io::stderr())?;
    store.save(&a.output)?;
    writeln!(out, "statements\t{}", report.statements)?;
    writeln!(out, "skipped lines\t{}", report.skipped)?;
    cli::write_stats(&store, out)?;
    Ok(0)
}

fn load_with_thresholds(path: &PathBuf, thresholds: Option<&str>) -> Result<Store> {
    let mut store = Store::load(path)?;
    if let Some(t) = thresholds {
        store.matrix_mut().set_thresholds(cli::parse_thresholds(t)?);
    }
    Ok(store)
}

fn query(a: QueryArgs, out: &mut dyn Write) -> Result<i32> {
    let store = load_with_thresholds(&a.store, a.thresholds.as_deref())?;
    let spec: PatternSpec = a.pattern.join(" ").parse()?;
    let opts = QueryOptions {
        ids: a.ids,
        count_only: a.count_only,
        tsv: a.tsv,
    };
    if let QueryOutcome::UnknownTerm(t) = cli::run_query(&store, &spec, opts, out)? {
        eprintln!("term not found: {t}");
    }
    Ok(0)
}

fn read_statements(inputs: &[PathBuf], gzip: bool) -> Result<Vec<ntriples::RawTriple>> {
    let mut all = Vec::new();
    for path in inputs {
        let gz = gzip || path.extension().is_some_and(|e| e == "gz");
        for item in ntriples::open(path, gz)? {
            match item {
                Ok(t) => all.push(t),
                Err(Error::Parse { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(all)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let store = Store::load(&a.store)?;
    let input = read_statements(&a.inputs, a.gzip)?;
    let opts = cli::VerifyOptions {
        sample: a.sample,
        seed: a.seed,
    };
    match cli::verify(&store, &input, &opts)? {
        cli::VerifyOutcome::Pass { patterns } => {
            writeln!(out, "ok: {} triples, {patterns} patterns checked", store.len())?;
            Ok(0)
        }
        cli::VerifyOutcome::Mismatch(m) => {
            eprint!("{m}");
            Ok(cli::EXIT_MISMATCH)
        }
    }
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let store = load_with_thresholds(&a.store, a.thresholds.as_deref())?;
    let specs = cli::read_patterns(BufReader::new(File::open(&a.queries)?))?;
    let mut patterns = Vec::with_capacity(specs.len());
    let mut unknown = 0;
    for spec in &specs {
        match spec.resolve(&store)? {
            Resolved::Pattern(p) => patterns.push(p),
            Resolved::UnknownTerm(_) => unknown += 1,
        }
    }
    if unknown > 0 {
        eprintln!("skipped {unknown} patterns with unknown terms");
    }
    let opts = BenchOptions {
        min_reps: a.min_reps,
        min_time: Duration::from_secs_f64(a.min_time.max(0.0)),
        decode: a.decode,
    };
    let rows = cli::bench(&store, &patterns, &opts)?;
    cli::write_bench_report(&rows, out)?;
    Ok(0)
}

fn parse_shape(s: &str) -> Result<Shape> {
    Shape::ALL
        .into_iter()
        .find(|sh| shape_name(*sh) == s)
        .ok_or_else(|| Error::Config(format!("unknown shape {s:?}")))
}

fn shape_name(s: Shape) -> &'static str {
    match s {
        Shape::Spo => "spo",
        Shape::Sp => "sp",
        Shape::Po => "po",
        Shape::P => "p",
        Shape::So => "so",
        Shape::S => "s",
        Shape::O => "o",
        Shape::All => "all",
    }
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Result<i32> {
    let store = Store::load(&a.store)?;
    let shapes = a.shapes.split(',').map(|s| parse_shape(s.trim())).collect::<Result<Vec<_>>>()?;
    let triples = store.matrix().triples();
    let mut rng = StdRng::seed_from_u64(a.seed);
    let mut text = String::new();
    let roles = [Role::Subject, Role::Predicate, Role::Object];
    for shape in shapes {
        for p in sample_patterns(&mut rng, &triples, shape, a.count) {
            let mut spec = PatternSpec::from_ids(&p);
            if a.terms && store.has_dictionary() {
                for (slot, role) in spec.terms.iter_mut().zip(roles) {
                    if let PatternTerm::Id(id) = *slot {
                        *slot = PatternTerm::Term(store.dictionary().term(role, id)?.to_string());
                    }
                }
            }
            text.push_str(&spec.to_string());
            text.push('\n');
        }
    }
    match &a.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}
