//! Build a store from N-Triples text, save it, load it back and query it
//! with term patterns.

use bmatrix::cli::{run_query, write_stats, PatternSpec, QueryOptions};
use bmatrix::ntriples::parse_str;
use bmatrix::store::{Store, StoreConfig};

const DATA: &str = r#"
<http://ex.org/alice> <http://ex.org/knows> <http://ex.org/bob> .
<http://ex.org/bob> <http://ex.org/knows> <http://ex.org/carol> .
<http://ex.org/carol> <http://ex.org/knows> <http://ex.org/alice> .
<http://ex.org/alice> <http://ex.org/name> "Alice" .
<http://ex.org/bob> <http://ex.org/name> "Bob" .
"#;

fn main() -> bmatrix::Result<()> {
    let (triples, _) = parse_str(DATA);
    let store = Store::from_raw(&triples, &StoreConfig::default())?;
    let dir = std::env::temp_dir().join(format!("bmatrix-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("people.bmx");
    let bytes = store.save(&path)?;
    println!("saved {} triples in {bytes} bytes", store.len());

    let loaded = Store::load(&path)?;
    let mut out = std::io::stdout();
    write_stats(&loaded, &mut out)?;
    for text in [
        "<http://ex.org/alice> ? ?",
        "? <http://ex.org/knows> <http://ex.org/alice>",
        "? <http://ex.org/name> ?",
        "<http://ex.org/dave> ? ?",
    ] {
        println!("> {text}");
        let spec: PatternSpec = text.parse()?;
        let outcome = run_query(&loaded, &spec, QueryOptions::default(), &mut out)?;
        println!("  {outcome:?}");
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
