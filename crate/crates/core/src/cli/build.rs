use std::io::Write;
use std::path::{Path, PathBuf};

use crate::bitvector::SamplePreset;
use crate::dictionary::DictionaryBuilder;
use crate::error::{Error, Result};
use crate::k2tree::{K2Config, Stage, VocabEncoding};
use crate::ntriples;
use crate::store::{Store, StoreConfig, Thresholds};

/// Tree shape options as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOptions {
    pub k1: u32,
    pub k1_levels: u32,
    pub k2: u32,
    pub leaf: u32,
    /// `None` disables the leaf vocabulary.
    pub vocab: Option<VocabEncoding>,
    pub sample: SamplePreset,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            k1: 4,
            k1_levels: 5,
            k2: 2,
            leaf: 8,
            vocab: Some(VocabEncoding::ColsFull),
            sample: SamplePreset::Default,
        }
    }
}

impl TreeOptions {
    pub fn to_config(&self) -> Result<K2Config> {
        let mut stages = Vec::new();
        if self.k1_levels > 0 {
            stages.push(Stage::new(self.k1, self.k1_levels));
        }
        stages.push(Stage::remaining(self.k2));
        let (leaf_size, vocab_encoding) = match self.vocab {
            Some(enc) => (self.leaf, enc),
            None => (1, VocabEncoding::Plain),
        };
        let config = K2Config {
            stages,
            leaf_size,
            vocab_encoding,
            sample: self.sample,
        };
        config.validate()?;
        Ok(config)
    }
}

pub fn parse_vocab(s: &str) -> Result<Option<VocabEncoding>> {
    Ok(match s {
        "plain" => Some(VocabEncoding::Plain),
        "cols-full" => Some(VocabEncoding::ColsFull),
        "cols-rank" => Some(VocabEncoding::ColsRank),
        "off" => None,
        _ => return Err(Error::Config(format!("unknown vocabulary encoding {s:?}"))),
    })
}

pub fn parse_sample(s: &str) -> Result<SamplePreset> {
    match s {
        "default" => Ok(SamplePreset::Default),
        "dense" => Ok(SamplePreset::Dense),
        _ => Err(Error::Config(format!("unknown sampling preset {s:?}"))),
    }
}

/// `a,b` for the two merge thresholds, or one number for both.
pub fn parse_thresholds(s: &str) -> Result<Thresholds> {
    let bad = || Error::Config(format!("bad thresholds {s:?}, expected N or N,M"));
    let nums: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match nums[..] {
        [t] => Ok(Thresholds {
            merge_sorted: t,
            merge_unsorted: t,
        }),
        [a, b] => Ok(Thresholds {
            merge_sorted: a,
            merge_unsorted: b,
        }),
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub inputs: Vec<PathBuf>,
    /// Force gzip decoding; otherwise decided by a `.gz` suffix.
    pub gzip: bool,
    /// Abort on the first malformed line instead of skipping it.
    pub strict: bool,
    pub config: StoreConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub statements: u64,
    pub skipped: u64,
}

/// Reads N-Triples from every input and builds the store. Malformed lines
/// are reported on `diag` and skipped unless `strict` is set.
pub fn build_store(opts: &BuildOptions, diag: &mut dyn Write) -> Result<(Store, BuildReport)> {
    let mut builder = DictionaryBuilder::new();
    let mut report = BuildReport::default();
    for path in &opts.inputs {
        let gzip = opts.gzip || path.extension().is_some_and(|e| e == "gz");
        for item in ntriples::open(path, gzip)? {
            match item {
                Ok(t) => {
                    builder.push(&t);
                    report.statements += 1;
                }
                Err(Error::Parse { line, message }) => {
                    if opts.strict {
                        return Err(Error::Parse { line, message });
                    }
                    report.skipped += 1;
                    writeln!(diag, "{}:{line}: {message}", display(path))?;
                }
                Err(e) => return Err(e),
            }
        }
    }
    let (dict, ids) = builder.finish();
    let store = Store::from_dictionary(dict, &ids, &opts.config)?;
    Ok((store, report))
}

fn display(path: &Path) -> String {
    if path == Path::new("-") {
        "<stdin>".into()
    } else {
        path.display().to_string()
    }
}
