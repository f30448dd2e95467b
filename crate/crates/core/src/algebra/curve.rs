//! The supersingular curve `E: y² = x³ + x` over `F_p` and its order-q
//! subgroup `G1`.

use alloc::string::String;
use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use super::counters::OpCounters;
use super::field::{FieldElement, PrimeField};
use super::primes::{is_probable_prime, MR_ROUNDS};
use super::scalar::{Scalar, ScalarField};
use super::uint::{Uint, BYTES};
use super::AlgebraError;

/// Retry cap for try-and-increment hashing. Reaching it means the
/// parameters are broken, not that the input was unlucky.
pub const MAX_HASH_ATTEMPTS: u32 = 256;

pub(crate) const GENERATOR_TAG: &[u8] = b"DVMPS-GENERATOR-v1";

pub(crate) const TAG_INFINITY: u8 = 0x00;
pub(crate) const TAG_EVEN: u8 = 0x02;
pub(crate) const TAG_ODD: u8 = 0x03;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

/// A point of the order-q subgroup of `E(F_p)`.
///
/// Values are only produced by [`CurveParams`] operations and decoders
/// that check curve and subgroup membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement(Repr);

impl GroupElement {
    pub const INFINITY: Self = Self(Repr::Infinity);

    pub fn is_infinity(&self) -> bool {
        matches!(self.0, Repr::Infinity)
    }

    pub(crate) fn affine(x: FieldElement, y: FieldElement) -> Self {
        Self(Repr::Affine { x, y })
    }

    pub(crate) fn coords(&self) -> Option<(FieldElement, FieldElement)> {
        match self.0 {
            Repr::Infinity => None,
            Repr::Affine { x, y } => Some((x, y)),
        }
    }
}

/// Jacobian coordinates `(X : Y : Z)` ↦ `(X/Z², Y/Z³)`; `Z = 0` is infinity.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jacobian {
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
}

/// Which built-in parameter set a [`CurveParams`] was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamSet {
    /// p = 43, q = 11: small enough to enumerate, useless for security.
    Toy,
    /// 512-bit p, 160-bit q: realistic sizes for timing; not a vetted
    /// production parameter set.
    Demo,
}

impl ParamSet {
    pub fn name(&self) -> &'static str {
        match self {
            ParamSet::Toy => "toy",
            ParamSet::Demo => "demo",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "toy" => Some(ParamSet::Toy),
            "demo" => Some(ParamSet::Demo),
            _ => None,
        }
    }
}

/// Curve, base field, scalar field and generator of a Type-1 pairing group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    name: String,
    fp: PrimeField,
    fr: ScalarField,
    cofactor: Uint,
    generator: GroupElement,
}

impl CurveParams {
    /// Validates `(p, q)` and derives the cofactor and generator.
    pub fn new(name: &str, p: Uint, q: Uint) -> Result<Self, AlgebraError> {
        if p.rem_u64(4) != 3 {
            return Err(AlgebraError::InvalidParameters("p must be 3 mod 4"));
        }
        if !is_probable_prime(&p, MR_ROUNDS) || !is_probable_prime(&q, MR_ROUNDS) {
            return Err(AlgebraError::InvalidParameters("p and q must be prime"));
        }
        let order = p
            .checked_add(&Uint::ONE)
            .ok_or(AlgebraError::InvalidParameters("p too large"))?;
        let (cofactor, rem) = order.div_rem(&q);
        if !rem.is_zero() {
            return Err(AlgebraError::InvalidParameters("q must divide p + 1"));
        }
        if cofactor.div_rem(&q).1.is_zero() {
            return Err(AlgebraError::InvalidParameters("q^2 must not divide p + 1"));
        }
        Self::assemble(name, p, q, cofactor)
    }

    fn assemble(name: &str, p: Uint, q: Uint, cofactor: Uint) -> Result<Self, AlgebraError> {
        let mut params = Self {
            name: String::from(name),
            fp: PrimeField::new(p)?,
            fr: ScalarField::new(q)?,
            cofactor,
            generator: GroupElement::INFINITY,
        };
        params.generator = params.map_to_subgroup(GENERATOR_TAG, b"")?;
        Ok(params)
    }

    /// The built-in sets are validated by tests, so construction skips the
    /// primality checks.
    pub fn builtin(set: ParamSet) -> Self {
        let (p, q, c) = match set {
            ParamSet::Toy => (Uint::from_u64(43), Uint::from_u64(11), Uint::from_u64(4)),
            ParamSet::Demo => (
                Uint::from_hex(super::params::DEMO_P).expect("valid hex"),
                Uint::from_hex(super::params::DEMO_Q).expect("valid hex"),
                Uint::from_hex(super::params::DEMO_COFACTOR).expect("valid hex"),
            ),
        };
        Self::assemble(set.name(), p, q, c).expect("built-in parameters are valid")
    }

    pub fn toy() -> Self {
        Self::builtin(ParamSet::Toy)
    }

    pub fn demo() -> Self {
        Self::builtin(ParamSet::Demo)
    }

    pub fn by_name(name: &str) -> Result<Self, AlgebraError> {
        ParamSet::from_name(name)
            .map(Self::builtin)
            .ok_or(AlgebraError::UnknownParameterSet)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_field(&self) -> &PrimeField {
        &self.fp
    }

    pub fn scalar_field(&self) -> &ScalarField {
        &self.fr
    }

    pub fn p(&self) -> &Uint {
        self.fp.modulus()
    }

    pub fn q(&self) -> &Uint {
        self.fr.order()
    }

    pub fn cofactor(&self) -> &Uint {
        &self.cofactor
    }

    pub fn generator(&self) -> &GroupElement {
        &self.generator
    }

    // ---- group law -------------------------------------------------------

    fn on_curve_coords(&self, x: &FieldElement, y: &FieldElement) -> bool {
        let f = &self.fp;
        f.square(y) == self.curve_rhs(x)
    }

    /// `x³ + x`
    pub(crate) fn curve_rhs(&self, x: &FieldElement) -> FieldElement {
        let f = &self.fp;
        f.mul(&f.add(&f.square(x), &f.one()), x)
    }

    pub fn is_on_curve(&self, t: &GroupElement) -> bool {
        match t.coords() {
            None => true,
            Some((x, y)) => self.on_curve_coords(&x, &y),
        }
    }

    /// `q·T = ∞`
    pub fn is_in_subgroup(&self, t: &GroupElement) -> bool {
        self.mul_uint(self.q(), t).is_infinity()
    }

    pub fn neg(&self, t: &GroupElement) -> GroupElement {
        match t.coords() {
            None => *t,
            Some((x, y)) => GroupElement::affine(x, self.fp.neg(&y)),
        }
    }

    pub fn double(&self, t: &GroupElement) -> GroupElement {
        let f = &self.fp;
        let Some((x, y)) = t.coords() else { return *t };
        if f.is_zero(&y) {
            return GroupElement::INFINITY;
        }
        let num = f.add(&f.mul_small(&f.square(&x), 3), &f.one());
        let lambda = f.mul(&num, &f.inv(&f.double(&y)).expect("y != 0"));
        let x3 = f.sub(&f.square(&lambda), &f.double(&x));
        let y3 = f.sub(&f.mul(&lambda, &f.sub(&x, &x3)), &y);
        GroupElement::affine(x3, y3)
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let f = &self.fp;
        let Some((x1, y1)) = a.coords() else {
            return *b;
        };
        let Some((x2, y2)) = b.coords() else {
            return *a;
        };
        if x1 == x2 {
            return if y1 == y2 {
                self.double(a)
            } else {
                GroupElement::INFINITY
            };
        }
        let lambda = f.mul(
            &f.sub(&y2, &y1),
            &f.inv(&f.sub(&x2, &x1)).expect("x1 != x2"),
        );
        let x3 = f.sub(&f.sub(&f.square(&lambda), &x1), &x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(&x1, &x3)), &y1);
        GroupElement::affine(x3, y3)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a GroupElement>>(&self, items: I) -> GroupElement {
        items
            .into_iter()
            .fold(GroupElement::INFINITY, |acc, t| self.add(&acc, t))
    }

    pub(crate) fn to_jacobian(&self, t: &GroupElement) -> Jacobian {
        match t.coords() {
            None => Jacobian {
                x: self.fp.one(),
                y: self.fp.one(),
                z: self.fp.zero(),
            },
            Some((x, y)) => Jacobian {
                x,
                y,
                z: self.fp.one(),
            },
        }
    }

    pub(crate) fn to_affine(&self, t: &Jacobian) -> GroupElement {
        let f = &self.fp;
        if f.is_zero(&t.z) {
            return GroupElement::INFINITY;
        }
        let zi = f.inv(&t.z).expect("z != 0");
        let zi2 = f.square(&zi);
        GroupElement::affine(f.mul(&t.x, &zi2), f.mul(&t.y, &f.mul(&zi2, &zi)))
    }

    /// dbl-2007-bl with a = 1.
    pub(crate) fn jacobian_double(&self, t: &Jacobian) -> Jacobian {
        let f = &self.fp;
        if f.is_zero(&t.z) || f.is_zero(&t.y) {
            return Jacobian {
                x: f.one(),
                y: f.one(),
                z: f.zero(),
            };
        }
        let xx = f.square(&t.x);
        let yy = f.square(&t.y);
        let yyyy = f.square(&yy);
        let zz = f.square(&t.z);
        let s = f.double(&f.sub(&f.sub(&f.square(&f.add(&t.x, &yy)), &xx), &yyyy));
        let m = f.add(&f.mul_small(&xx, 3), &f.square(&zz));
        let x3 = f.sub(&f.square(&m), &f.double(&s));
        let y3 = f.sub(&f.mul(&m, &f.sub(&s, &x3)), &f.mul_small(&yyyy, 8));
        let z3 = f.sub(&f.sub(&f.square(&f.add(&t.y, &t.z)), &yy), &zz);
        Jacobian {
            x: x3,
            y: y3,
            z: z3,
        }
    }

    /// madd-2007-bl: Jacobian plus affine.
    pub(crate) fn jacobian_add_affine(
        &self,
        t: &Jacobian,
        x2: &FieldElement,
        y2: &FieldElement,
    ) -> Jacobian {
        let f = &self.fp;
        if f.is_zero(&t.z) {
            return Jacobian {
                x: *x2,
                y: *y2,
                z: f.one(),
            };
        }
        let z1z1 = f.square(&t.z);
        let u2 = f.mul(x2, &z1z1);
        let s2 = f.mul(&f.mul(y2, &t.z), &z1z1);
        let h = f.sub(&u2, &t.x);
        let r = f.double(&f.sub(&s2, &t.y));
        if f.is_zero(&h) {
            return if f.is_zero(&r) {
                self.jacobian_double(t)
            } else {
                Jacobian {
                    x: f.one(),
                    y: f.one(),
                    z: f.zero(),
                }
            };
        }
        let hh = f.square(&h);
        let i = f.double(&f.double(&hh));
        let j = f.mul(&h, &i);
        let v = f.mul(&t.x, &i);
        let x3 = f.sub(&f.sub(&f.square(&r), &j), &f.double(&v));
        let y3 = f.sub(&f.mul(&r, &f.sub(&v, &x3)), &f.double(&f.mul(&t.y, &j)));
        let z3 = f.sub(&f.sub(&f.square(&f.add(&t.z, &h)), &z1z1), &hh);
        Jacobian {
            x: x3,
            y: y3,
            z: z3,
        }
    }

    /// Uncounted double-and-add by an arbitrary integer.
    pub(crate) fn mul_uint(&self, k: &Uint, t: &GroupElement) -> GroupElement {
        let Some((x, y)) = t.coords() else { return *t };
        let mut acc = self.to_jacobian(&GroupElement::INFINITY);
        for i in (0..k.bits()).rev() {
            acc = self.jacobian_double(&acc);
            if k.bit(i) {
                acc = self.jacobian_add_affine(&acc, &x, &y);
            }
        }
        self.to_affine(&acc)
    }

    /// `k·T`; counts one scalar multiplication.
    pub fn scalar_mul(&self, k: &Scalar, t: &GroupElement, ops: &mut OpCounters) -> GroupElement {
        ops.scalar_mults += 1;
        self.mul_uint(k.as_uint(), t)
    }

    // ---- encoding --------------------------------------------------------

    /// Compressed width: tag byte plus big-endian x.
    pub fn point_len(&self) -> usize {
        1 + self.fp.byte_len()
    }

    /// `0x00` for infinity, else `0x02`/`0x03` by the parity of canonical y,
    /// followed by x padded to the field width.
    pub fn encode_point(&self, t: &GroupElement) -> Vec<u8> {
        match t.coords() {
            None => alloc::vec![TAG_INFINITY],
            Some((x, y)) => {
                let mut out = alloc::vec![0u8; self.point_len()];
                out[0] = if self.fp.is_odd(&y) {
                    TAG_ODD
                } else {
                    TAG_EVEN
                };
                self.fp.to_uint(&x).write_be(&mut out[1..]);
                out
            }
        }
    }

    /// Inverse of [`Self::encode_point`], including the subgroup check.
    /// Returns the point and the number of bytes consumed.
    pub fn decode_point(&self, bytes: &[u8]) -> Result<(GroupElement, usize), AlgebraError> {
        let (&tag, rest) = bytes.split_first().ok_or(AlgebraError::InvalidEncoding)?;
        match tag {
            TAG_INFINITY => Ok((GroupElement::INFINITY, 1)),
            TAG_EVEN | TAG_ODD => {
                let width = self.fp.byte_len();
                let raw = rest.get(..width).ok_or(AlgebraError::InvalidEncoding)?;
                let xv = Uint::from_be_bytes(raw).ok_or(AlgebraError::InvalidEncoding)?;
                let x = self
                    .fp
                    .from_canonical(&xv)
                    .ok_or(AlgebraError::InvalidEncoding)?;
                let mut y = self
                    .fp
                    .sqrt(&self.curve_rhs(&x))
                    .map_err(|_| AlgebraError::NotOnCurve)?;
                if self.fp.is_odd(&y) != (tag == TAG_ODD) {
                    y = self.fp.neg(&y);
                }
                if self.fp.is_odd(&y) != (tag == TAG_ODD) {
                    // y = 0 has no odd representative
                    return Err(AlgebraError::InvalidEncoding);
                }
                let t = GroupElement::affine(x, y);
                if !self.is_in_subgroup(&t) {
                    return Err(AlgebraError::NotInSubgroup);
                }
                Ok((t, 1 + width))
            }
            _ => Err(AlgebraError::InvalidEncoding),
        }
    }

    /// Canonical integer coordinates, for fixtures and debugging.
    pub fn point_coords(&self, t: &GroupElement) -> Option<(Uint, Uint)> {
        t.coords()
            .map(|(x, y)| (self.fp.to_uint(&x), self.fp.to_uint(&y)))
    }

    /// Builds a point from canonical coordinates, checking curve and
    /// subgroup membership.
    pub fn point_from_coords(&self, x: &Uint, y: &Uint) -> Result<GroupElement, AlgebraError> {
        let x = self
            .fp
            .from_canonical(x)
            .ok_or(AlgebraError::InvalidEncoding)?;
        let y = self
            .fp
            .from_canonical(y)
            .ok_or(AlgebraError::InvalidEncoding)?;
        if !self.on_curve_coords(&x, &y) {
            return Err(AlgebraError::NotOnCurve);
        }
        let t = GroupElement::affine(x, y);
        if !self.is_in_subgroup(&t) {
            return Err(AlgebraError::NotInSubgroup);
        }
        Ok(t)
    }

    // ---- hashing ---------------------------------------------------------

    /// Try-and-increment map into the order-q subgroup, uncounted.
    pub(crate) fn map_to_subgroup(
        &self,
        tag: &[u8],
        input: &[u8],
    ) -> Result<GroupElement, AlgebraError> {
        let width = (self.fp.byte_len() + 16).min(BYTES);
        for counter in 0..MAX_HASH_ATTEMPTS {
            let mut wide = [0u8; BYTES];
            for (block, chunk) in wide[..width].chunks_mut(32).enumerate() {
                let digest = Sha256::new()
                    .chain_update((tag.len() as u32).to_be_bytes())
                    .chain_update(tag)
                    .chain_update(counter.to_be_bytes())
                    .chain_update([block as u8])
                    .chain_update(input)
                    .finalize();
                chunk.copy_from_slice(&digest[..chunk.len()]);
            }
            let x = self.fp.reduce_be_bytes(&wide[..width]);
            let Ok(y) = self.fp.sqrt(&self.curve_rhs(&x)) else {
                continue;
            };
            let candidate = self.mul_uint(&self.cofactor, &GroupElement::affine(x, y));
            if !candidate.is_infinity() {
                return Ok(candidate);
            }
        }
        Err(AlgebraError::HashRetriesExhausted)
    }

    /// `H1: {0,1}* → G1`. Deterministic; never returns infinity; one H.
    pub fn hash_to_group(
        &self,
        input: &[u8],
        domain_tag: &[u8],
        ops: &mut OpCounters,
    ) -> Result<GroupElement, AlgebraError> {
        ops.hashes += 1;
        self.map_to_subgroup(domain_tag, input)
    }

    /// Digest of `tag ‖ len(msg) ‖ msg ‖ compressed(point)`, without
    /// reduction. This is the exact H2 preimage layout.
    pub fn hash_to_scalar_input(
        &self,
        msg: &[u8],
        point: &GroupElement,
        domain_tag: &[u8],
    ) -> Vec<u8> {
        let mut buf = Vec::with_capacity(8 + domain_tag.len() + msg.len() + self.point_len());
        buf.extend_from_slice(&(domain_tag.len() as u32).to_be_bytes());
        buf.extend_from_slice(domain_tag);
        buf.extend_from_slice(&(msg.len() as u32).to_be_bytes());
        buf.extend_from_slice(msg);
        buf.extend_from_slice(&self.encode_point(point));
        buf
    }

    /// `H2: {0,1}* × G1 → Z_q^*`. A zero reduction maps to 1; one H.
    pub fn hash_to_scalar(
        &self,
        msg: &[u8],
        point: &GroupElement,
        domain_tag: &[u8],
        ops: &mut OpCounters,
    ) -> Scalar {
        ops.hashes += 1;
        let digest = Sha256::digest(self.hash_to_scalar_input(msg, point, domain_tag));
        let s = self.fr.reduce_be_bytes(&digest);
        if s.is_zero() {
            self.fr.one()
        } else {
            s
        }
    }
}
