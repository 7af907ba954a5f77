//! A k²-tree over a small binary matrix: the bit layout and the four
//! query kinds.

use bmatrix::k2tree::{K2Config, K2Tree};

fn bits(v: impl Iterator<Item = bool>) -> String {
    v.map(|b| if b { '1' } else { '0' }).collect()
}

fn main() -> bmatrix::Result<()> {
    let points = [(0, 1), (1, 0), (1, 1), (4, 5), (5, 4), (6, 7), (7, 7)];
    let tree = K2Tree::build(&points, 8, 8, &K2Config::uniform(2))?;
    for r in 0..8 {
        let row: String = (0..8).map(|c| if tree.cell(r, c).unwrap() { '#' } else { '.' }).collect();
        println!("  {row}");
    }
    for level in 0..tree.num_levels() {
        let range = tree.level_range(level);
        println!("level {level} (k = {}): {}", tree.arity(level), bits(range.map(|p| tree.bit(p))));
    }
    println!("children of position 0 start at {:?}", tree.children_base(0));
    println!("row 1: {:?}", tree.row(1, 0, 7, None)?);
    println!("column 7: {:?}", tree.col(7, None)?);
    println!("rows 4..=7, columns 4..=7: {:?}", tree.range(4, 7, 4, 7)?);

    // default shape: k = 4 on top, k = 2 below, 8x8 leaves
    let big: Vec<(u64, u64)> = (0..20_000u64).map(|i| ((i * 7919) % 5000, i)).collect();
    let t = K2Tree::build(&big, 5000, 20_000, &K2Config::default())?;
    let arities: Vec<u32> = (0..t.num_levels()).map(|l| t.arity(l)).collect();
    println!(
        "20000 cells in a 5000 x 20000 matrix: arities {arities:?}, {} leaf kinds, {} bytes",
        t.vocabulary().map_or(0, |v| v.len()),
        t.size_in_bytes()
    );
    Ok(())
}
