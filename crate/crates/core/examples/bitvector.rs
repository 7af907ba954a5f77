//! Rank and select on a sampled bit vector.

use bmatrix::bitvector::{BitVector, SamplePreset};

fn main() {
    let text = "1011000111010010";
    let bv = BitVector::from_bits(text.chars().map(|c| c == '1'), SamplePreset::Default.sample_rate());
    println!("bits      {text}");
    println!("length    {}, ones {}", bv.len(), bv.count_ones());
    for i in [0, 3, 9, 15] {
        println!("rank1({i:>2}) = {}   rank0({i:>2}) = {}", bv.rank1(i).unwrap(), bv.rank0(i).unwrap());
    }
    for j in 1..=4 {
        println!("select1({j}) = {:?}   select0({j}) = {:?}", bv.select1(j), bv.select0(j));
    }

    let big = BitVector::from_bits((0..1_000_000).map(|i| i % 7 == 0), SamplePreset::Default.sample_rate());
    let dense = BitVector::from_bits(big.iter(), SamplePreset::Dense.sample_rate());
    for (name, v) in [("default", &big), ("dense", &dense)] {
        println!(
            "{name:>7}: {} bit bytes + {} sample bytes ({:.1}% extra)",
            v.bit_bytes(),
            v.sample_bytes(),
            100.0 * v.sample_bytes() as f64 / v.bit_bytes() as f64
        );
    }
}
