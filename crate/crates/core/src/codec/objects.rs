use alloc::vec::Vec;

use super::{DecodeError, Reader, Writer};
use crate::algebra::{CurveParams, GroupElement, Scalar};
use crate::scheme::{
    Commitment, Delegation, MultiProxySignature, PartialSignature, UserKeyPair, Warrant,
};

pub fn encode_point(curve: &CurveParams, t: &GroupElement) -> Vec<u8> {
    curve.encode_point(t)
}

pub fn decode_point(curve: &CurveParams, bytes: &[u8]) -> Result<GroupElement, DecodeError> {
    let mut r = Reader::new(bytes);
    let t = r.get_point(curve)?;
    r.finish()?;
    Ok(t)
}

pub fn encode_scalar(curve: &CurveParams, s: &Scalar) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_scalar(curve, s);
    w.into_bytes()
}

pub fn decode_scalar(curve: &CurveParams, bytes: &[u8]) -> Result<Scalar, DecodeError> {
    let mut r = Reader::new(bytes);
    let s = r.get_scalar(curve)?;
    r.finish()?;
    Ok(s)
}

/// `warrant ‖ U ‖ V`.
pub fn encode_delegation(curve: &CurveParams, d: &Delegation) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_bytes(d.warrant.encoded())
        .put_point(curve, &d.u)
        .put_point(curve, &d.v);
    w.into_bytes()
}

pub fn decode_delegation(curve: &CurveParams, bytes: &[u8]) -> Result<Delegation, DecodeError> {
    let mut r = Reader::new(bytes);
    let warrant = Warrant::decode(r.get_bytes()?)?;
    let u = r.get_point(curve)?;
    let v = r.get_point(curve)?;
    r.finish()?;
    Ok(Delegation { warrant, u, v })
}

/// `signer ‖ Z_Pi`.
pub fn encode_commitment(curve: &CurveParams, c: &Commitment) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_identity(&c.signer).put_point(curve, &c.z);
    w.into_bytes()
}

pub fn decode_commitment(curve: &CurveParams, bytes: &[u8]) -> Result<Commitment, DecodeError> {
    let mut r = Reader::new(bytes);
    let signer = r.get_identity()?;
    let z = r.get_point(curve)?;
    r.finish()?;
    Ok(Commitment { signer, z })
}

/// `signer ‖ Z_Pi ‖ X_Pi`.
pub fn encode_partial(curve: &CurveParams, p: &PartialSignature) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_identity(&p.signer)
        .put_point(curve, &p.z)
        .put_point(curve, &p.x);
    w.into_bytes()
}

pub fn decode_partial(curve: &CurveParams, bytes: &[u8]) -> Result<PartialSignature, DecodeError> {
    let mut r = Reader::new(bytes);
    let signer = r.get_identity()?;
    let z = r.get_point(curve)?;
    let x = r.get_point(curve)?;
    r.finish()?;
    Ok(PartialSignature { signer, z, x })
}

/// `warrant ‖ Z_P ‖ X ‖ U`.
pub fn encode_signature(curve: &CurveParams, s: &MultiProxySignature) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_bytes(s.warrant.encoded())
        .put_point(curve, &s.z)
        .put_point(curve, &s.x)
        .put_point(curve, &s.u);
    w.into_bytes()
}

pub fn decode_signature(
    curve: &CurveParams,
    bytes: &[u8],
) -> Result<MultiProxySignature, DecodeError> {
    let mut r = Reader::new(bytes);
    let warrant = Warrant::decode(r.get_bytes()?)?;
    let z = r.get_point(curve)?;
    let x = r.get_point(curve)?;
    let u = r.get_point(curve)?;
    r.finish()?;
    Ok(MultiProxySignature { warrant, z, x, u })
}

/// `identity ‖ Q_ID ‖ S_ID`.
pub fn encode_user_key(curve: &CurveParams, k: &UserKeyPair) -> Vec<u8> {
    let mut w = Writer::new();
    w.put_identity(&k.identity)
        .put_point(curve, &k.public)
        .put_point(curve, &k.secret);
    w.into_bytes()
}

pub fn decode_user_key(curve: &CurveParams, bytes: &[u8]) -> Result<UserKeyPair, DecodeError> {
    let mut r = Reader::new(bytes);
    let identity = r.get_identity()?;
    let public = r.get_point(curve)?;
    let secret = r.get_point(curve)?;
    r.finish()?;
    if public.is_infinity() {
        return Err(DecodeError::InvalidValue(
            "public key is the identity element",
        ));
    }
    Ok(UserKeyPair {
        identity,
        public,
        secret,
    })
}
