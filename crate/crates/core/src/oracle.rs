//! Brute-force reference store: a sorted triple list and linear scans.
//!
//! The list is kept in (p, o, s) order, which is the store's column order,
//! so a filtered scan yields results in the same order the store promises.

use crate::triple::{IdTriple, TriplePattern};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleList {
    triples: Vec<IdTriple>,
}

impl TripleList {
    pub fn new(triples: &[IdTriple]) -> Self {
        let mut triples = triples.to_vec();
        triples.sort_unstable_by_key(IdTriple::pos_key);
        triples.dedup();
        TripleList { triples }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn as_slice(&self) -> &[IdTriple] {
        &self.triples
    }

    fn scan(&self, pattern: TriplePattern) -> impl Iterator<Item = &IdTriple> + '_ {
        self.triples.iter().filter(move |t| pattern.matches(t))
    }

    pub fn query(&self, pattern: &TriplePattern) -> Vec<IdTriple> {
        self.scan(*pattern).copied().collect()
    }

    pub fn contains(&self, s: u32, p: u32, o: u32) -> bool {
        self.scan(TriplePattern::new(Some(s), Some(p), Some(o))).next().is_some()
    }

    pub fn objects(&self, s: u32, p: u32) -> Vec<u32> {
        self.scan(TriplePattern::new(Some(s), Some(p), None)).map(|t| t.o).collect()
    }

    pub fn subjects(&self, p: u32, o: u32) -> Vec<u32> {
        self.scan(TriplePattern::new(None, Some(p), Some(o))).map(|t| t.s).collect()
    }

    pub fn predicates(&self, s: u32, o: u32) -> Vec<u32> {
        self.scan(TriplePattern::new(Some(s), None, Some(o))).map(|t| t.p).collect()
    }

    pub fn predicate_objects(&self, s: u32) -> Vec<(u32, u32)> {
        self.scan(TriplePattern::new(Some(s), None, None)).map(|t| (t.p, t.o)).collect()
    }

    pub fn subject_predicates(&self, o: u32) -> Vec<(u32, u32)> {
        self.scan(TriplePattern::new(None, None, Some(o))).map(|t| (t.s, t.p)).collect()
    }

    pub fn subject_objects(&self, p: u32) -> Vec<(u32, u32)> {
        self.scan(TriplePattern::new(None, Some(p), None)).map(|t| (t.s, t.o)).collect()
    }
}
