use std::fmt;

use rand::{rngs::StdRng, SeedableRng};

use super::pattern::PatternSpec;
use crate::error::Result;
use crate::ntriples::{format_triple, RawTriple};
use crate::oracle::TripleList;
use crate::store::Store;
use crate::synth::{random_patterns, sample_patterns};
use crate::triple::{IdTriple, Shape, TriplePattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Patterns per shape.
    pub sample: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { sample: 200, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass { patterns: usize },
    Mismatch(Box<Mismatch>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub what: String,
    pub pattern: Option<PatternSpec>,
    pub expected: Vec<IdTriple>,
    pub got: Vec<IdTriple>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mismatch: {}", self.what)?;
        if let Some(p) = &self.pattern {
            writeln!(f, "pattern: {p}")?;
        }
        const SHOWN: usize = 20;
        for (name, list) in [("expected", &self.expected), ("got", &self.got)] {
            writeln!(f, "{name} ({} triples):", list.len())?;
            for t in list.iter().take(SHOWN) {
                writeln!(f, "  {t}")?;
            }
            if list.len() > SHOWN {
                writeln!(f, "  ...")?;
            }
        }
        Ok(())
    }
}

/// Checks `store` against the statements it was built from: the encoded
/// triple set first, then sampled patterns of every shape against a linear
/// scan.
pub fn verify(store: &Store, input: &[RawTriple], opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let mut ids = Vec::with_capacity(input.len());
    for t in input {
        match store.dictionary().encode(t) {
            Ok(id) => ids.push(id),
            Err(_) => {
                return Ok(mismatch(Mismatch {
                    what: format!("statement not in the dictionary: {}", format_triple(t)),
                    pattern: None,
                    expected: Vec::new(),
                    got: Vec::new(),
                }))
            }
        }
    }
    let oracle = TripleList::new(&ids);
    Ok(check_against(store, &oracle, opts))
}

/// Same as [`verify`] for a store built from ids.
pub fn verify_ids(store: &Store, triples: &[IdTriple], opts: &VerifyOptions) -> VerifyOutcome {
    check_against(store, &TripleList::new(triples), opts)
}

fn check_against(store: &Store, oracle: &TripleList, opts: &VerifyOptions) -> VerifyOutcome {
    let all = TriplePattern::default();
    let got_all = store.matrix().triples();
    if got_all != oracle.as_slice() {
        return mismatch(Mismatch {
            what: "stored triple set differs from the input".into(),
            pattern: Some(PatternSpec::from_ids(&all)),
            expected: oracle.as_slice().to_vec(),
            got: got_all,
        });
    }
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let dims = store.matrix().dims();
    let mut checked = 1;
    for shape in Shape::ALL {
        if shape == Shape::All {
            continue;
        }
        let hits = opts.sample / 2;
        let mut patterns = sample_patterns(&mut rng, oracle.as_slice(), shape, hits);
        patterns.extend(random_patterns(&mut rng, dims, shape, opts.sample - hits));
        for p in patterns {
            if p.shape() != shape {
                // an id space is empty
                continue;
            }
            let expected = oracle.query(&p);
            let got = match store.query(&p) {
                Ok(g) => g,
                Err(e) => {
                    return mismatch(Mismatch {
                        what: format!("query failed: {e}"),
                        pattern: Some(PatternSpec::from_ids(&p)),
                        expected,
                        got: Vec::new(),
                    })
                }
            };
            if got != expected {
                return mismatch(Mismatch {
                    what: format!("{} results differ", shape.label()),
                    pattern: Some(PatternSpec::from_ids(&p)),
                    expected,
                    got,
                });
            }
            checked += 1;
        }
    }
    VerifyOutcome::Pass { patterns: checked }
}

fn mismatch(m: Mismatch) -> VerifyOutcome {
    VerifyOutcome::Mismatch(Box::new(m))
}
