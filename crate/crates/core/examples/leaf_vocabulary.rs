//! The three leaf vocabulary encodings on a matrix with one cell per column.

use bmatrix::k2tree::{K2Config, K2Tree, VocabEncoding};

fn main() -> bmatrix::Result<()> {
    let cols = 50_000u64;
    let points: Vec<(u64, u64)> = (0..cols).map(|c| ((c / 3) % 4000 + (c % 2), c)).collect();
    for leaf in [2, 4, 8] {
        for enc in [VocabEncoding::Plain, VocabEncoding::ColsFull, VocabEncoding::ColsRank] {
            let t = K2Tree::build(&points, 4001, cols, &K2Config::default().with_vocabulary(leaf, enc))?;
            let v = t.vocabulary().expect("vocabulary enabled");
            let space = t.space();
            println!(
                "{leaf}x{leaf} {:>9}: {:>5} entries, {:>7} payload bits, leaf ids {:>6} B, tree {:>6} B",
                enc.name(),
                v.len(),
                v.payload_bits(),
                space.leaf_ids,
                space.total()
            );
        }
    }
    // column encodings need at most one cell per leaf column
    let stacked = [(0, 0), (1, 0)];
    let err = K2Tree::build(&stacked, 8, 8, &K2Config::default().with_vocabulary(2, VocabEncoding::ColsFull));
    println!("two cells in one leaf column: {}", err.unwrap_err());
    Ok(())
}
