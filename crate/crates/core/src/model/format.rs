//! Binary model container.
//!
//! ```text
//! "BCN1"                      magic, 4 bytes
//! version                     u32 LE
//! M, k                        u32 LE each
//! per view (M times):
//!   name_len                  u32 LE
//!   name                      name_len bytes of UTF-8
//!   d_j                       u32 LE
//!   pivot                     u8 (0 or 1)
//!   input_kind                u8 (0 = sparse bag-of-words, 1 = dense features)
//! f, p                        u8 activation codes
//! W_0 .. W_{M-1}              k x d_j, row-major f64 LE
//! b                           k f64 LE
//! W'_0 .. W'_{M-1}            d_j x k, row-major f64 LE
//! c_0 .. c_{M-1}              d_j f64 LE
//! ```
//!
//! Trailing bytes after the last tensor are rejected.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{ModelParams, ViewKind, ViewSpec};
use crate::error::{FormatError, Result};
use crate::numerics::{Activation, Matrix, Vector};

pub const MAGIC: [u8; 4] = *b"BCN1";
pub const FORMAT_VERSION: u32 = 1;

pub(super) fn encode(m: &ModelParams) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, m.views.len() as u32);
    put_u32(&mut out, m.k as u32);
    for v in &m.views {
        put_u32(&mut out, v.name.len() as u32);
        out.extend_from_slice(v.name.as_bytes());
        put_u32(&mut out, v.dim as u32);
        out.push(v.pivot as u8);
        out.push(v.kind.code());
    }
    out.push(m.f.code());
    out.push(m.p.code());
    for (_, t) in m.tensors() {
        for x in t {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.buf.len() - self.pos < n {
            return Err(FormatError::Truncated { offset: self.pos, needed: n });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, FormatError> {
        let bytes = n.checked_mul(8).ok_or_else(|| FormatError::Invalid("tensor too large".into()))?;
        let b = self.take(bytes)?;
        Ok(b.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect())
    }
}

pub(super) fn decode(bytes: &[u8]) -> Result<ModelParams> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let magic = r.take(4)?;
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic.try_into().expect("4 bytes")).into());
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(FormatError::VersionMismatch { expected: FORMAT_VERSION, found: version }.into());
    }
    let m = r.u32()? as usize;
    let k = r.u32()? as usize;
    let mut views = Vec::with_capacity(m.min(1024));
    for _ in 0..m {
        let len = r.u32()? as usize;
        let name = String::from_utf8(r.take(len)?.to_vec())
            .map_err(|e| FormatError::Invalid(format!("view name is not UTF-8: {e}")))?;
        let dim = r.u32()? as usize;
        let pivot = match r.u8()? {
            0 => false,
            1 => true,
            b => return Err(FormatError::Invalid(format!("pivot flag {b}")).into()),
        };
        let kind = ViewKind::from_code(r.u8()?).ok_or_else(|| FormatError::Invalid("unknown input kind".into()))?;
        views.push(ViewSpec { name, dim, kind, pivot });
    }
    let act = |c: u8| Activation::from_code(c).ok_or_else(|| FormatError::Invalid(format!("activation code {c}")));
    let f = act(r.u8()?)?;
    let p = act(r.u8()?)?;

    let mut enc = Vec::with_capacity(m);
    for v in &views {
        enc.push(Matrix::from_vec(k, v.dim, r.f64s(k * v.dim)?)?);
    }
    let bias = Vector::from(r.f64s(k)?);
    let mut dec = Vec::with_capacity(m);
    for v in &views {
        dec.push(Matrix::from_vec(v.dim, k, r.f64s(k * v.dim)?)?);
    }
    let mut dec_bias = Vec::with_capacity(m);
    for v in &views {
        dec_bias.push(Vector::from(r.f64s(v.dim)?));
    }
    if r.pos != bytes.len() {
        return Err(FormatError::Invalid(format!("{} trailing bytes after tensors", bytes.len() - r.pos)).into());
    }
    let params = ModelParams { k, views, enc, bias, dec, dec_bias, f, p };
    params.validate().map_err(|e| FormatError::Invalid(format!("{e}")))?;
    Ok(params)
}

fn put_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}
