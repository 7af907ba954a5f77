//! The triple store: subject and object matrices plus the predicate index.
//!
//! Triples are sorted by (p, o, s) and column `i` stands for the `i`-th one.
//! The subject matrix `ST` has a one at `(s - 1, i)`, the object matrix `OT`
//! at `(o - 1, i)`, so every column of either matrix holds exactly one one.
//! Results that are lists of columns come back in ascending column order.

mod file;
mod predicate;

use std::ops::Range;

pub use file::{Store, StoreSpace, FORMAT_VERSION, MAGIC};
pub use predicate::PredicateIndex;

use crate::error::{Error, Result};
use crate::k2tree::{K2Config, K2Tree};
use crate::triple::{IdTriple, Shape, TriplePattern};

/// Intermediate-result sizes at which queries switch from per-result cell
/// or column lookups to a second row or range query plus a merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    /// `(s,?,o)`: merge of two sorted row results.
    pub merge_sorted: usize,
    /// `(?,p,?)`: merge of two range results sorted by column.
    pub merge_unsorted: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            merge_sorted: 10,
            merge_unsorted: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoreConfig {
    pub tree: K2Config,
    /// Predicate sampling period.
    pub sample_period: usize,
    pub thresholds: Thresholds,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            tree: K2Config::default(),
            sample_period: 1024,
            thresholds: Thresholds::default(),
        }
    }
}

/// Sizes of the three id spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dims {
    pub subjects: u32,
    pub predicates: u32,
    pub objects: u32,
}

impl Dims {
    pub fn new(subjects: u32, predicates: u32, objects: u32) -> Self {
        Dims {
            subjects,
            predicates,
            objects,
        }
    }

    /// Smallest dims covering every id in `triples`.
    pub fn covering(triples: &[IdTriple]) -> Self {
        triples.iter().fold(Dims::default(), |d, t| Dims {
            subjects: d.subjects.max(t.s),
            predicates: d.predicates.max(t.p),
            objects: d.objects.max(t.o),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatrix {
    st: K2Tree,
    ot: K2Tree,
    preds: PredicateIndex,
    dims: Dims,
    thresholds: Thresholds,
}

impl BMatrix {
    /// Builds the store. Duplicate triples are merged; any id outside
    /// `dims` (or zero) is rejected.
    pub fn build(triples: &[IdTriple], dims: Dims, config: &StoreConfig) -> Result<Self> {
        for t in triples {
            check_id("subject id", t.s, dims.subjects)?;
            check_id("predicate id", t.p, dims.predicates)?;
            check_id("object id", t.o, dims.objects)?;
        }
        let mut sorted = triples.to_vec();
        sorted.sort_unstable_by_key(IdTriple::pos_key);
        sorted.dedup();
        let n = sorted.len() as u64;

        let st_points: Vec<(u64, u64)> = sorted
            .iter()
            .enumerate()
            .map(|(i, t)| (t.s as u64 - 1, i as u64))
            .collect();
        let st = K2Tree::build(&st_points, dims.subjects as u64, n, &config.tree)?;
        drop(st_points);
        let ot_points: Vec<(u64, u64)> = sorted
            .iter()
            .enumerate()
            .map(|(i, t)| (t.o as u64 - 1, i as u64))
            .collect();
        let ot = K2Tree::build(&ot_points, dims.objects as u64, n, &config.tree)?;
        let preds = PredicateIndex::build(sorted.iter().map(|t| t.p), dims.predicates, config.sample_period)?;
        Ok(BMatrix {
            st,
            ot,
            preds,
            dims,
            thresholds: config.thresholds,
        })
    }

    pub(crate) fn from_parts(st: K2Tree, ot: K2Tree, preds: PredicateIndex, dims: Dims, thresholds: Thresholds) -> Result<Self> {
        let n = preds.len();
        if st.n_cols() != n || ot.n_cols() != n {
            return Err(Error::Format("matrix widths differ from the triple count".into()));
        }
        if st.n_rows() != dims.subjects as u64 || ot.n_rows() != dims.objects as u64 {
            return Err(Error::Format("matrix heights differ from the dictionary sizes".into()));
        }
        if preds.n_predicates() != dims.predicates {
            return Err(Error::Format("predicate index size differs from the header".into()));
        }
        if st.count_ones() != n || ot.count_ones() != n {
            return Err(Error::Format("matrices do not hold one cell per triple".into()));
        }
        Ok(BMatrix {
            st,
            ot,
            preds,
            dims,
            thresholds,
        })
    }

    /// Number of triples.
    pub fn len(&self) -> u64 {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn subject_matrix(&self) -> &K2Tree {
        &self.st
    }

    pub fn object_matrix(&self) -> &K2Tree {
        &self.ot
    }

    pub fn predicate_index(&self) -> &PredicateIndex {
        &self.preds
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds
    }

    /// Strategy thresholds affect speed only, never results.
    pub fn set_thresholds(&mut self, thresholds: Thresholds) {
        self.thresholds = thresholds;
    }

    fn check_subject(&self, s: u32) -> Result<()> {
        check_id("subject id", s, self.dims.subjects)
    }

    fn check_object(&self, o: u32) -> Result<()> {
        check_id("object id", o, self.dims.objects)
    }

    fn columns_of(&self, p: u32) -> Result<Range<u64>> {
        self.preds.columns(p)
    }

    /// Subject of column `i`: single-one column query on `ST`.
    fn subject_at(&self, i: u64) -> u32 {
        first_row(&self.st, i)
    }

    fn object_at(&self, i: u64) -> u32 {
        first_row(&self.ot, i)
    }

    /// Columns of row `r` within `cols`, ascending.
    fn row_columns(tree: &K2Tree, r: u64, cols: Range<u64>) -> Vec<u64> {
        let mut out = Vec::new();
        if !cols.is_empty() {
            tree.for_each_in(r, r, cols.start, cols.end - 1, |_, c| {
                out.push(c);
                true
            });
        }
        out
    }

    /// `(s,p,o)`: is the triple stored?
    pub fn contains(&self, s: u32, p: u32, o: u32) -> Result<bool> {
        self.check_subject(s)?;
        self.check_object(o)?;
        let cols = self.columns_of(p)?;
        if cols.is_empty() {
            return Ok(false);
        }
        let mut found = false;
        self.st.for_each_in(s as u64 - 1, s as u64 - 1, cols.start, cols.end - 1, |_, i| {
            found = self.ot.contains(o as u64 - 1, i);
            !found
        });
        Ok(found)
    }

    /// `(s,p,?)`: objects, ascending.
    pub fn objects(&self, s: u32, p: u32) -> Result<Vec<u32>> {
        self.check_subject(s)?;
        let cols = self.columns_of(p)?;
        Ok(Self::row_columns(&self.st, s as u64 - 1, cols)
            .into_iter()
            .map(|i| self.object_at(i))
            .collect())
    }

    /// `(?,p,o)`: subjects, ascending.
    pub fn subjects(&self, p: u32, o: u32) -> Result<Vec<u32>> {
        self.check_object(o)?;
        let cols = self.columns_of(p)?;
        Ok(Self::row_columns(&self.ot, o as u64 - 1, cols)
            .into_iter()
            .map(|i| self.subject_at(i))
            .collect())
    }

    /// `(s,?,o)`: predicates, ascending.
    pub fn predicates(&self, s: u32, o: u32) -> Result<Vec<u32>> {
        self.check_subject(s)?;
        self.check_object(o)?;
        let n = self.len();
        let by_object = Self::row_columns(&self.ot, o as u64 - 1, 0..n);
        let hits: Vec<u64> = if by_object.len() <= self.thresholds.merge_sorted {
            by_object
                .into_iter()
                .filter(|&i| self.st.contains(s as u64 - 1, i))
                .collect()
        } else {
            let span = by_object[0]..by_object[by_object.len() - 1] + 1;
            let by_subject = Self::row_columns(&self.st, s as u64 - 1, span);
            intersect_sorted(&by_object, &by_subject)
        };
        Ok(hits.into_iter().map(|i| self.preds.predicate_of(i)).collect())
    }

    /// `(s,?,?)`: `(p, o)` pairs in column order.
    pub fn predicate_objects(&self, s: u32) -> Result<Vec<(u32, u32)>> {
        self.check_subject(s)?;
        Ok(Self::row_columns(&self.st, s as u64 - 1, 0..self.len())
            .into_iter()
            .map(|i| (self.preds.predicate_of(i), self.object_at(i)))
            .collect())
    }

    /// `(?,?,o)`: `(s, p)` pairs in column order.
    pub fn subject_predicates(&self, o: u32) -> Result<Vec<(u32, u32)>> {
        self.check_object(o)?;
        Ok(Self::row_columns(&self.ot, o as u64 - 1, 0..self.len())
            .into_iter()
            .map(|i| (self.subject_at(i), self.preds.predicate_of(i)))
            .collect())
    }

    /// `(?,p,?)`: `(s, o)` pairs in column order.
    pub fn subject_objects(&self, p: u32) -> Result<Vec<(u32, u32)>> {
        let cols = self.columns_of(p)?;
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        let (lo, hi) = (cols.start, cols.end - 1);
        let mut by_subject: Vec<(u64, u32)> = Vec::with_capacity((hi - lo + 1) as usize);
        self.st.for_each_in(0, u64::MAX, lo, hi, |r, i| {
            by_subject.push((i, r as u32 + 1));
            true
        });
        by_subject.sort_unstable();
        if by_subject.len() <= self.thresholds.merge_unsorted {
            return Ok(by_subject
                .into_iter()
                .map(|(i, s)| (s, self.object_at(i)))
                .collect());
        }
        let mut by_object: Vec<(u64, u32)> = Vec::with_capacity(by_subject.len());
        self.ot.for_each_in(0, u64::MAX, lo, hi, |r, i| {
            by_object.push((i, r as u32 + 1));
            true
        });
        by_object.sort_unstable();
        // one cell per column in both matrices: the column lists coincide
        debug_assert_eq!(by_subject.len(), by_object.len());
        Ok(by_subject
            .into_iter()
            .zip(by_object)
            .map(|((i, s), (j, o))| {
                debug_assert_eq!(i, j);
                (s, o)
            })
            .collect())
    }

    /// Every triple, in column order.
    pub fn triples(&self) -> Vec<IdTriple> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for p in 1..=self.dims.predicates {
            let pairs = self.subject_objects(p).expect("predicate id in range");
            out.extend(pairs.into_iter().map(|(s, o)| IdTriple::new(s, p, o)));
        }
        out
    }

    /// Answers any pattern as full triples, in column order.
    pub fn query(&self, pattern: &TriplePattern) -> Result<Vec<IdTriple>> {
        let TriplePattern { s, p, o } = *pattern;
        Ok(match pattern.shape() {
            Shape::Spo => {
                let (s, p, o) = (s.unwrap(), p.unwrap(), o.unwrap());
                if self.contains(s, p, o)? {
                    vec![IdTriple::new(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            Shape::Sp => {
                let (s, p) = (s.unwrap(), p.unwrap());
                self.objects(s, p)?.into_iter().map(|o| IdTriple::new(s, p, o)).collect()
            }
            Shape::Po => {
                let (p, o) = (p.unwrap(), o.unwrap());
                self.subjects(p, o)?.into_iter().map(|s| IdTriple::new(s, p, o)).collect()
            }
            Shape::So => {
                let (s, o) = (s.unwrap(), o.unwrap());
                self.predicates(s, o)?.into_iter().map(|p| IdTriple::new(s, p, o)).collect()
            }
            Shape::S => {
                let s = s.unwrap();
                self.predicate_objects(s)?
                    .into_iter()
                    .map(|(p, o)| IdTriple::new(s, p, o))
                    .collect()
            }
            Shape::O => {
                let o = o.unwrap();
                self.subject_predicates(o)?
                    .into_iter()
                    .map(|(s, p)| IdTriple::new(s, p, o))
                    .collect()
            }
            Shape::P => {
                let p = p.unwrap();
                self.subject_objects(p)?
                    .into_iter()
                    .map(|(s, o)| IdTriple::new(s, p, o))
                    .collect()
            }
            Shape::All => self.triples(),
        })
    }

    /// Number of matches of `pattern`.
    pub fn count(&self, pattern: &TriplePattern) -> Result<usize> {
        Ok(match pattern.shape() {
            Shape::Spo => self.contains(pattern.s.unwrap(), pattern.p.unwrap(), pattern.o.unwrap())? as usize,
            Shape::All => self.len() as usize,
            _ => self.query(pattern)?.len(),
        })
    }
}

fn check_id(what: &'static str, id: u32, max: u32) -> Result<()> {
    if id == 0 || id > max {
        return Err(Error::OutOfRange {
            what,
            value: id as u64,
            limit: max as u64 + 1,
        });
    }
    Ok(())
}

/// Row of the single one in column `i`, as a 1-based id.
fn first_row(tree: &K2Tree, i: u64) -> u32 {
    let mut row = None;
    tree.for_each_in(0, u64::MAX, i, i, |r, _| {
        row = Some(r);
        false
    });
    row.expect("every column holds one cell") as u32 + 1
}

fn intersect_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
