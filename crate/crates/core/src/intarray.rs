//! Fixed-width packed integer array.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::io::{read_len, read_u32, read_u64_vec, write_u32, write_u64, write_u64_slice, MAX_LEN};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntArray {
    words: Vec<u64>,
    len: usize,
    width: u32,
}

impl IntArray {
    /// Empty array of `width`-bit entries (`width <= 64`; zero is allowed and
    /// stores nothing).
    pub fn new(width: u32) -> Self {
        assert!(width <= 64, "width {width} exceeds 64");
        IntArray {
            words: Vec::new(),
            len: 0,
            width,
        }
    }

    pub fn with_capacity(width: u32, capacity: usize) -> Self {
        let mut a = Self::new(width);
        a.words.reserve((capacity * width as usize).div_ceil(64));
        a
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(width: u32, values: I) -> Self {
        let mut a = Self::new(width);
        for v in values {
            a.push(v);
        }
        a
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Appends `value`; panics if it does not fit in `width` bits.
    pub fn push(&mut self, value: u64) {
        let w = self.width as usize;
        assert!(w == 64 || value >> w == 0, "value {value} wider than {w} bits");
        let bit = self.len * w;
        let needed = (bit + w).div_ceil(64);
        self.words.resize(needed, 0);
        self.len += 1;
        if w == 0 {
            return;
        }
        let (wi, off) = (bit / 64, bit % 64);
        self.words[wi] |= value << off;
        if off + w > 64 {
            self.words[wi + 1] |= value >> (64 - off);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let w = self.width as usize;
        if w == 0 {
            return 0;
        }
        let bit = i * w;
        let (wi, off) = (bit / 64, bit % 64);
        let mask = if w == 64 { !0 } else { (1u64 << w) - 1 };
        let mut v = self.words[wi] >> off;
        if off + w > 64 {
            v |= self.words[wi + 1] << (64 - off);
        }
        v & mask
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Payload size in bits, `len * width`.
    pub fn payload_bits(&self) -> usize {
        self.len * self.width as usize
    }

    pub fn size_in_bytes(&self) -> usize {
        self.words.len() * 8
    }

    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u32(w, self.width)?;
        n += write_u64(w, self.len as u64)?;
        n += write_u64_slice(w, &self.words)?;
        Ok(n)
    }

    pub fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let width = read_u32(r)?;
        if width > 64 {
            return Err(Error::Format(format!("integer width {width} exceeds 64")));
        }
        let len = read_len(r, MAX_LEN, "integer array")?;
        Self::read_words(r, width, len)
    }

    /// Packed words only, for containers that store width and length
    /// themselves.
    pub(crate) fn write_words<W: Write>(&self, w: &mut W) -> Result<usize> {
        write_u64_slice(w, &self.words)
    }

    pub(crate) fn read_words<R: Read>(r: &mut R, width: u32, len: usize) -> Result<Self> {
        let words = read_u64_vec(r, (len * width as usize).div_ceil(64))?;
        Ok(IntArray { words, len, width })
    }
}

/// Bits needed to write `v` in binary; zero needs zero bits.
pub fn bit_width(v: u64) -> u32 {
    64 - v.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn straddles_word_boundaries() {
        let vals: Vec<u64> = (0..200).map(|i| (i * 37) % 128).collect();
        let a = IntArray::from_values(7, vals.iter().copied());
        assert_eq!(a.iter().collect::<Vec<_>>(), vals);
        assert_eq!(a.payload_bits(), 1400);
    }

    #[test]
    fn zero_width_stores_zeros() {
        let a = IntArray::from_values(0, [0, 0, 0]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.get(2), 0);
        assert_eq!(a.size_in_bytes(), 0);
    }

    #[test]
    #[should_panic]
    fn rejects_wide_value() {
        IntArray::new(3).push(8);
    }

    #[test]
    fn bit_widths() {
        assert_eq!(bit_width(0), 0);
        assert_eq!(bit_width(1), 1);
        assert_eq!(bit_width(9), 4);
        assert_eq!(bit_width(u64::MAX), 64);
    }

    proptest! {
        #[test]
        fn round_trip(width in 1u32..=64, raw in proptest::collection::vec(any::<u64>(), 0..300)) {
            let mask = if width == 64 { !0 } else { (1u64 << width) - 1 };
            let vals: Vec<u64> = raw.into_iter().map(|v| v & mask).collect();
            let a = IntArray::from_values(width, vals.iter().copied());
            let mut buf = Vec::new();
            a.serialize_into(&mut buf).unwrap();
            let b = IntArray::deserialize_from(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(b.iter().collect::<Vec<_>>(), vals);
        }
    }
}
