//! Directly addressable codes: variable-length integers with random access.

use bmatrix::bitvector::SamplePreset;
use bmatrix::dac::Dac;

fn main() -> bmatrix::Result<()> {
    let values = [5u64, 1, 9, 300, 0, 2, 70_000];
    let dac = Dac::encode(&values, 2, SamplePreset::Default.sample_rate())?;
    println!("values {values:?}, chunk width 2 bits");
    for level in 0..dac.num_levels() {
        let more: String = dac.level_bitmap(level).iter().map(|b| if b { '1' } else { '0' }).collect();
        println!("level {level}: chunks {:?} continue {more}", dac.level_chunks(level));
    }
    for i in [0, 3, 6] {
        println!("access({i}) = {}", dac.access(i)?);
    }

    // small values dominate, so wider chunks are not always better
    let skewed: Vec<u64> = (0..100_000u64).map(|i| if i % 50 == 0 { i * 997 } else { i % 4 }).collect();
    for b in [2, 4, 8, 16] {
        let d = Dac::encode(&skewed, b, SamplePreset::Default.sample_rate())?;
        println!("b = {b:>2}: {} bytes, {} levels", d.size_in_bytes(), d.num_levels());
    }
    Ok(())
}
