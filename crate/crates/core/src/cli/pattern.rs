use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use crate::dictionary::Role;
use crate::error::{Error, Result};
use crate::ntriples::{format_term, parse_pattern_line, PatternTerm};
use crate::store::Store;
use crate::triple::{Shape, TriplePattern};

/// A pattern as written by a user: each position is `?`, `#<id>` or a term
/// in N-Triples syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    pub terms: [PatternTerm; 3],
}

/// A pattern mapped into id space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolved {
    Pattern(TriplePattern),
    /// A bound term is not in the dictionary, so nothing can match.
    UnknownTerm(String),
}

impl PatternSpec {
    pub fn from_ids(p: &TriplePattern) -> Self {
        let term = |v: Option<u32>| v.map_or(PatternTerm::Any, PatternTerm::Id);
        PatternSpec {
            terms: [term(p.s), term(p.p), term(p.o)],
        }
    }

    pub fn shape(&self) -> Shape {
        let bound = |t: &PatternTerm| *t != PatternTerm::Any;
        Shape::of(bound(&self.terms[0]), bound(&self.terms[1]), bound(&self.terms[2]))
    }

    /// Looks terms up in the dictionary. Numeric ids must fall inside the
    /// store's id ranges.
    pub fn resolve(&self, store: &Store) -> Result<Resolved> {
        let dims = store.matrix().dims();
        let roles = [
            (Role::Subject, dims.subjects),
            (Role::Predicate, dims.predicates),
            (Role::Object, dims.objects),
        ];
        let mut ids = [None; 3];
        for (slot, (term, (role, max))) in ids.iter_mut().zip(self.terms.iter().zip(roles)) {
            *slot = match term {
                PatternTerm::Any => None,
                PatternTerm::Id(id) => {
                    if *id > max {
                        return Err(Error::OutOfRange {
                            what: role.name(),
                            value: *id as u64,
                            limit: max as u64 + 1,
                        });
                    }
                    Some(*id)
                }
                PatternTerm::Term(text) => match store.dictionary().id(role, text) {
                    Ok(id) => Some(id),
                    Err(Error::NotFound(_)) => return Ok(Resolved::UnknownTerm(format_term(text))),
                    Err(e) => return Err(e),
                },
            };
        }
        Ok(Resolved::Pattern(TriplePattern::new(ids[0], ids[1], ids[2])))
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_pattern_line(s) {
            Ok(Some(terms)) => Ok(PatternSpec { terms }),
            Ok(None) => Err(Error::Parse {
                line: 1,
                message: "empty pattern".into(),
            }),
            Err(message) => Err(Error::Parse { line: 1, message }),
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match t {
                PatternTerm::Any => f.write_str("?")?,
                PatternTerm::Id(id) => write!(f, "#{id}")?,
                PatternTerm::Term(text) => f.write_str(&format_term(text))?,
            }
        }
        Ok(())
    }
}

/// Reads a query file: one pattern per line, blank lines and `#` comments
/// ignored.
pub fn read_patterns<R: BufRead>(reader: R) -> Result<Vec<PatternSpec>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        match parse_pattern_line(&line) {
            Ok(Some(terms)) => out.push(PatternSpec { terms }),
            Ok(None) => {}
            Err(message) => {
                return Err(Error::Parse {
                    line: i as u64 + 1,
                    message,
                })
            }
        }
    }
    Ok(out)
}
