//! Reading and writing N-Triples, including malformed lines.

use bmatrix::ntriples::{format_triple, parse_str};

const TEXT: &str = r#"
# people
<http://ex.org/alice> <http://xmlns.com/foaf/0.1/name> "Alice"@en .
<http://ex.org/alice> <http://xmlns.com/foaf/0.1/knows> _:b0 .
_:b0 <http://xmlns.com/foaf/0.1/age> "42"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://ex.org/bob> <http://ex.org/says> "tab\there é" .
<http://ex.org/broken> "literal predicate" <http://ex.org/x> .
"#;

fn main() {
    let (triples, errors) = parse_str(TEXT);
    for t in &triples {
        println!("{:?}", (&t.subject, &t.predicate, &t.object));
    }
    for e in &errors {
        println!("skipped: {e}");
    }
    println!("round trip:");
    for t in &triples {
        println!("  {}", format_triple(t));
    }
}
