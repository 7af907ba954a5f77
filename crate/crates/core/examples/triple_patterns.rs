//! All eight triple patterns on a four-triple store.

use bmatrix::store::{BMatrix, Dims, StoreConfig};
use bmatrix::triple::{IdTriple, Shape, TriplePattern};

fn main() -> bmatrix::Result<()> {
    let triples: Vec<IdTriple> = [(1, 1, 1), (2, 1, 2), (1, 2, 2), (2, 2, 1)]
        .iter()
        .map(|&(s, p, o)| IdTriple::new(s, p, o))
        .collect();
    let m = BMatrix::build(&triples, Dims::new(2, 2, 2), &StoreConfig::default())?;
    println!("predicate column starts: {:?}", m.predicate_index().starts());

    println!("(1,2,2) stored: {}", m.contains(1, 2, 2)?);
    println!("(2,2,?) objects: {:?}", m.objects(2, 2)?);
    println!("(?,1,2) subjects: {:?}", m.subjects(1, 2)?);
    println!("(2,?,2) predicates: {:?}", m.predicates(2, 2)?);
    println!("(1,?,?) (p, o): {:?}", m.predicate_objects(1)?);
    println!("(?,?,2) (s, p): {:?}", m.subject_predicates(2)?);
    println!("(?,2,?) (s, o): {:?}", m.subject_objects(2)?);

    for shape in Shape::ALL {
        let (s, p, o) = shape.bound();
        let pat = TriplePattern::new(s.then_some(2), p.then_some(1), o.then_some(2));
        let hits: Vec<String> = m.query(&pat)?.iter().map(ToString::to_string).collect();
        println!("{:<17} {:<10} {}", shape.family(), pat.to_string(), hits.join(" "));
    }
    Ok(())
}
