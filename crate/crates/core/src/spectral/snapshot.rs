//! `MZKF` field snapshots.
//!
//! Layout (little endian): magic `b"MZKF"`, version `u16 = 1`, frame `u8`,
//! `n_a u32`, `n_b u32`, `len_a f64`, `len_b f64`, `time f64`, then
//! `n_a * n_b` `f64` samples in row-major order.

use std::io::{Read, Write};

use super::field::{Field, Frame};
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"MZKF";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 + 1 + 4 + 4 + 8 + 8 + 8;

pub fn write_snapshot<W: Write>(mut w: W, field: &Field) -> Result<()> {
    field.validate()?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * field.values.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(field.frame.code());
    buf.extend_from_slice(&(field.grid.n_a as u32).to_le_bytes());
    buf.extend_from_slice(&(field.grid.n_b as u32).to_le_bytes());
    buf.extend_from_slice(&field.grid.len_a.to_le_bytes());
    buf.extend_from_slice(&field.grid.len_b.to_le_bytes());
    buf.extend_from_slice(&field.time.to_le_bytes());
    for v in &field.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<Field> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let frame = Frame::from_code(header[6])
        .ok_or_else(|| Error::Format(format!("unknown frame code {}", header[6])))?;
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let grid = GridSpec::new(u32_at(7), u32_at(11), f64_at(15), f64_at(23));
    grid.validate()
        .map_err(|e| Error::Format(format!("invalid grid in header: {e}")))?;
    let time = f64_at(31);

    let mut body = vec![0u8; 8 * grid.len()];
    r.read_exact(&mut body)
        .map_err(|e| Error::Format(format!("truncated sample block: {e}")))?;
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let field = Field {
        grid,
        values,
        time,
        frame,
    };
    field.validate()?;
    Ok(field)
}
