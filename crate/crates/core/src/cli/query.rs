use std::io::Write;

use super::pattern::{PatternSpec, Resolved};
use crate::error::Result;
use crate::ntriples::format_term;
use crate::store::Store;
use crate::triple::IdTriple;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryOptions {
    /// Print numeric ids instead of terms.
    pub ids: bool,
    pub count_only: bool,
    /// Tab-separated columns instead of N-Triples statements.
    pub tsv: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryOutcome {
    Matched(usize),
    UnknownTerm(String),
}

/// Runs one pattern and prints its matches to `out`. Stores without a
/// dictionary always print ids.
pub fn run_query(store: &Store, spec: &PatternSpec, opts: QueryOptions, out: &mut dyn Write) -> Result<QueryOutcome> {
    let pattern = match spec.resolve(store)? {
        Resolved::Pattern(p) => p,
        Resolved::UnknownTerm(t) => {
            if opts.count_only {
                writeln!(out, "0")?;
            }
            return Ok(QueryOutcome::UnknownTerm(t));
        }
    };
    if opts.count_only {
        let n = store.matrix().count(&pattern)?;
        writeln!(out, "{n}")?;
        return Ok(QueryOutcome::Matched(n));
    }
    let results = store.query(&pattern)?;
    let ids = opts.ids || !store.has_dictionary();
    for t in &results {
        write_triple(store, t, ids, opts.tsv, out)?;
    }
    Ok(QueryOutcome::Matched(results.len()))
}

pub(crate) fn write_triple(store: &Store, t: &IdTriple, ids: bool, tsv: bool, out: &mut dyn Write) -> Result<()> {
    if ids {
        if tsv {
            writeln!(out, "{}\t{}\t{}", t.s, t.p, t.o)?;
        } else {
            writeln!(out, "{} {} {}", t.s, t.p, t.o)?;
        }
        return Ok(());
    }
    let raw = store.decode(t)?;
    let (s, p, o) = (format_term(&raw.subject), format_term(&raw.predicate), format_term(&raw.object));
    if tsv {
        writeln!(out, "{s}\t{p}\t{o}")?;
    } else {
        writeln!(out, "{s} {p} {o} .")?;
    }
    Ok(())
}

/// Counts and per-component sizes.
pub fn write_stats(store: &Store, out: &mut dyn Write) -> Result<()> {
    let m = store.matrix();
    let d = store.dictionary();
    let dims = m.dims();
    let n = m.len();
    let sp = store.space();
    writeln!(out, "triples\t{n}")?;
    writeln!(out, "subjects\t{}", dims.subjects)?;
    writeln!(out, "predicates\t{}", dims.predicates)?;
    writeln!(out, "objects\t{}", dims.objects)?;
    writeln!(out, "shared subject-objects\t{}", d.n_shared())?;
    let per = |b: usize| if n == 0 { 0.0 } else { b as f64 / n as f64 };
    writeln!(out, "component\tbytes\tbytes/triple")?;
    let rows = [
        ("header", sp.header),
        ("dictionary", sp.dictionary),
        ("predicate index", sp.predicate_index),
        ("ST", sp.st),
        ("OT", sp.ot),
        ("structure (ST+OT+predicates)", sp.structure()),
        ("file", sp.file()),
    ];
    for (name, bytes) in rows {
        writeln!(out, "{name}\t{bytes}\t{:.3}", per(bytes))?;
    }
    for (name, tree, mem) in [
        ("ST", m.subject_matrix(), sp.st_memory),
        ("OT", m.object_matrix(), sp.ot_memory),
    ] {
        let levels: Vec<String> = (0..tree.num_levels()).map(|l| tree.arity(l).to_string()).collect();
        let leaf = tree
            .vocabulary()
            .map_or("none".to_string(), |v| format!("{} entries, {} bits", v.len(), v.payload_bits()));
        writeln!(
            out,
            "{name} tree\tarities {}\tleaf vocabulary {leaf}\tin memory {} bytes (bits {}, rank samples {}, leaf ids {}, vocabulary {})",
            levels.join(","),
            mem.total(),
            mem.bits,
            mem.rank_samples,
            mem.leaf_ids,
            mem.vocabulary
        )?;
    }
    Ok(())
}
