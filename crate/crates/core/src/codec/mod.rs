//! Canonical byte encodings.
//!
//! Integers are big-endian. Variable-length fields carry a 4-byte length
//! prefix. Points use the compressed form of [`CurveParams::encode_point`]
//! and scalars are fixed-width at the byte length of `q`.

mod fixture;
mod objects;

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{AlgebraError, CurveParams, GroupElement, Scalar};
use crate::scheme::Identity;

pub use fixture::{parse_fixture, render_fixture, Fixture};
pub use objects::{
    decode_commitment, decode_delegation, decode_partial, decode_point, decode_scalar,
    decode_signature, decode_user_key, encode_commitment, encode_delegation, encode_partial,
    encode_point, encode_scalar, encode_signature, encode_user_key,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("input truncated")]
    Truncated,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("element count exceeds the available input")]
    CountOverflow,
    #[error("field has length {found}, expected {expected}")]
    BadFieldLength { expected: usize, found: usize },
    #[error("identity is not valid UTF-8 or is empty")]
    InvalidIdentity,
    #[error("invalid point: {0}")]
    InvalidPoint(AlgebraError),
    #[error("scalar is not below the group order")]
    ScalarOutOfRange,
    #[error("invalid value: {0}")]
    InvalidValue(&'static str),
    #[error("unknown message kind {0:#04x}")]
    UnknownKind(u8),
    #[error("fixture line {0} is malformed")]
    FixtureSyntax(usize),
    #[error("fixture has no entry named {0}")]
    MissingEntry(String),
}

#[derive(Debug, Default, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put_u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn put_u16(&mut self, v: u16) -> &mut Self {
        self.put_raw(&v.to_be_bytes())
    }

    pub fn put_u32(&mut self, v: u32) -> &mut Self {
        self.put_raw(&v.to_be_bytes())
    }

    pub fn put_u64(&mut self, v: u64) -> &mut Self {
        self.put_raw(&v.to_be_bytes())
    }

    pub fn put_raw(&mut self, bytes: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(bytes);
        self
    }

    /// Length-prefixed bytes.
    ///
    /// # Panics
    /// If `bytes` is longer than `u32::MAX`.
    pub fn put_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        let len = u32::try_from(bytes.len()).expect("field exceeds u32 length");
        self.put_u32(len).put_raw(bytes)
    }

    pub fn put_identity(&mut self, id: &Identity) -> &mut Self {
        self.put_bytes(id.as_bytes())
    }

    pub fn put_point(&mut self, curve: &CurveParams, t: &GroupElement) -> &mut Self {
        self.put_raw(&curve.encode_point(t))
    }

    pub fn put_scalar(&mut self, curve: &CurveParams, s: &Scalar) -> &mut Self {
        let mut out = alloc::vec![0u8; curve.scalar_field().byte_len()];
        s.as_uint().write_be(&mut out);
        self.put_raw(&out)
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug, Clone)]
pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len()
    }

    pub(crate) fn rest(&self) -> &'a [u8] {
        self.buf
    }

    pub fn get_raw(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() < n {
            return Err(DecodeError::Truncated);
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub fn get_array<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        let mut out = [0u8; N];
        out.copy_from_slice(self.get_raw(N)?);
        Ok(out)
    }

    pub fn get_u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.get_array::<1>()?[0])
    }

    pub fn get_u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_be_bytes(self.get_array()?))
    }

    pub fn get_u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_be_bytes(self.get_array()?))
    }

    pub fn get_u64(&mut self) -> Result<u64, DecodeError> {
        Ok(u64::from_be_bytes(self.get_array()?))
    }

    pub fn get_bytes(&mut self) -> Result<&'a [u8], DecodeError> {
        let len = self.get_u32()? as usize;
        self.get_raw(len)
    }

    pub fn get_identity(&mut self) -> Result<Identity, DecodeError> {
        let raw = self.get_bytes()?;
        let label = core::str::from_utf8(raw).map_err(|_| DecodeError::InvalidIdentity)?;
        Identity::new(label).map_err(|_| DecodeError::InvalidIdentity)
    }

    pub fn get_point(&mut self, curve: &CurveParams) -> Result<GroupElement, DecodeError> {
        let (t, used) = curve.decode_point(self.buf).map_err(|e| match e {
            AlgebraError::InvalidEncoding if self.buf.len() < curve.point_len() => {
                DecodeError::Truncated
            }
            other => DecodeError::InvalidPoint(other),
        })?;
        self.buf = &self.buf[used..];
        Ok(t)
    }

    pub fn get_scalar(&mut self, curve: &CurveParams) -> Result<Scalar, DecodeError> {
        let fr = curve.scalar_field();
        let raw = self.get_raw(fr.byte_len())?;
        let v = crate::algebra::Uint::from_be_bytes(raw).ok_or(DecodeError::ScalarOutOfRange)?;
        fr.from_canonical(&v).ok_or(DecodeError::ScalarOutOfRange)
    }

    /// Fails unless the input is fully consumed.
    pub fn finish(self) -> Result<(), DecodeError> {
        match self.buf.len() {
            0 => Ok(()),
            n => Err(DecodeError::TrailingBytes(n)),
        }
    }
}
