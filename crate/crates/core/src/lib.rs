//! Compact in-memory RDF store built from two k²-tree matrices.
//!
//! Triples are dictionary-encoded, sorted by predicate, object and subject,
//! and numbered by that order. The subject matrix has a one at
//! `(subject, triple)` and the object matrix at `(object, triple)`; both are
//! stored as k²-trees. A small predicate index maps triple numbers to
//! predicates and back. All eight triple patterns reduce to row, column, cell
//! and range queries on the two trees.

pub mod bitvector;
pub mod cli;
pub mod dac;
pub mod dictionary;
pub mod error;
pub mod intarray;
pub mod io;
pub mod k2tree;
pub mod ntriples;
pub mod oracle;
pub mod store;
pub mod synth;
pub mod triple;

pub use error::{Error, Result};
