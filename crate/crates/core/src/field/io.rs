//! Flat binary and CSV encodings of lattice data.
//!
//! Binary layout (all little-endian):
//!
//! | offset | size   | content                      |
//! |--------|--------|------------------------------|
//! | 0      | 4      | magic (`LQGF` for fields)    |
//! | 4      | 4      | version `u32` (= 1)          |
//! | 8      | 4      | `n` `u32`                    |
//! | 12     | 4      | kind `u32`                   |
//! | 16     | 8      | spacing `f64`                |
//! | 24     | 8·n²   | values `f64`, row-major      |

use super::{FieldGrid, FieldKind};
use crate::error::{Error, Result};
use std::io::{Read, Write};

pub const FIELD_MAGIC: &[u8; 4] = b"LQGF";
pub const FORMAT_VERSION: u32 = 1;

pub(crate) fn encode_grid(magic: &[u8; 4], kind: u32, n: usize, spacing: f64, values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + 8 * values.len());
    out.extend_from_slice(magic);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&kind.to_le_bytes());
    out.extend_from_slice(&spacing.to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub(crate) struct RawGrid {
    pub kind: u32,
    pub n: usize,
    pub spacing: f64,
    pub values: Vec<f64>,
}

pub(crate) fn decode_grid(magic: &[u8; 4], bytes: &[u8]) -> Result<RawGrid> {
    if bytes.len() < 24 {
        return Err(Error::Format("truncated header".into()));
    }
    if &bytes[0..4] != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&bytes[0..4]),
            String::from_utf8_lossy(magic)
        )));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = u32_at(8) as usize;
    let kind = u32_at(12);
    let spacing = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let expected = 24 + 8 * n * n;
    if bytes.len() != expected {
        return Err(Error::Format(format!("expected {expected} bytes, got {}", bytes.len())));
    }
    let values = bytes[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(RawGrid { kind, n, spacing, values })
}

pub fn field_to_bytes(field: &FieldGrid) -> Vec<u8> {
    encode_grid(FIELD_MAGIC, field.kind().code(), field.n(), field.spacing(), field.values())
}

pub fn field_from_bytes(bytes: &[u8]) -> Result<FieldGrid> {
    let raw = decode_grid(FIELD_MAGIC, bytes)?;
    let kind = FieldKind::from_code(raw.kind)
        .ok_or_else(|| Error::Format(format!("unknown field kind {}", raw.kind)))?;
    super::check_grid(raw.n, raw.spacing).map_err(|e| Error::Format(e.to_string()))?;
    if raw.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Format("non-finite value".into()));
    }
    Ok(FieldGrid::from_parts(raw.n, raw.spacing, raw.values, kind, None))
}

pub fn write_field<W: Write>(mut w: W, field: &FieldGrid) -> Result<()> {
    w.write_all(&field_to_bytes(field))?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<FieldGrid> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    field_from_bytes(&buf)
}

/// CSV rows `x,y,<column>` in physical coordinates, row-major.
pub(crate) fn grid_csv(n: usize, spacing: f64, column: &str, value: impl Fn(usize) -> String) -> String {
    let mut s = format!("x,y,{column}\n");
    for row in 0..n {
        for col in 0..n {
            s.push_str(&format!(
                "{},{},{}\n",
                col as f64 * spacing,
                row as f64 * spacing,
                value(row * n + col)
            ));
        }
    }
    s
}

pub fn field_to_csv(field: &FieldGrid) -> String {
    grid_csv(field.n(), field.spacing(), "value", |v| format!("{:e}", field.values()[v]))
}
