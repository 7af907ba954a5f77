//! Little-endian primitives shared by every on-disk section.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Types with a stable binary layout.
///
/// `serialize_into` returns the number of bytes written so callers can
/// account for space per component without a second pass.
pub trait Serializable: Sized {
    fn serialize_into<W: Write>(&self, writer: &mut W) -> Result<usize>;
    fn deserialize_from<R: Read>(reader: &mut R) -> Result<Self>;

    fn serialized_len(&self) -> usize {
        let mut sink = std::io::sink();
        self.serialize_into(&mut sink).unwrap_or(0)
    }
}

pub(crate) fn write_u8<W: Write>(w: &mut W, v: u8) -> Result<usize> {
    w.write_all(&[v])?;
    Ok(1)
}

pub(crate) fn write_u16<W: Write>(w: &mut W, v: u16) -> Result<usize> {
    w.write_all(&v.to_le_bytes())?;
    Ok(2)
}

pub(crate) fn write_u32<W: Write>(w: &mut W, v: u32) -> Result<usize> {
    w.write_all(&v.to_le_bytes())?;
    Ok(4)
}

pub(crate) fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<usize> {
    w.write_all(&v.to_le_bytes())?;
    Ok(8)
}

pub(crate) fn write_u64_slice<W: Write>(w: &mut W, vs: &[u64]) -> Result<usize> {
    for &v in vs {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(vs.len() * 8)
}

pub(crate) fn read_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut buf = [0u8; 1];
    r.read_exact(&mut buf)?;
    Ok(buf[0])
}

pub(crate) fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut buf = [0u8; 2];
    r.read_exact(&mut buf)?;
    Ok(u16::from_le_bytes(buf))
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Reads a length field and converts it to `usize`, rejecting values that
/// exceed `max` so corrupt input cannot trigger huge allocations.
pub(crate) fn read_len<R: Read>(r: &mut R, max: u64, what: &str) -> Result<usize> {
    let v = read_u64(r)?;
    if v > max {
        return Err(Error::Format(format!("{what} length {v} exceeds limit {max}")));
    }
    usize::try_from(v).map_err(|_| Error::Format(format!("{what} length {v} does not fit")))
}

pub(crate) fn read_u64_vec<R: Read>(r: &mut R, count: usize) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        out.push(read_u64(r)?);
    }
    Ok(out)
}

/// Upper bound for any length field read from disk.
pub(crate) const MAX_LEN: u64 = 1 << 40;
