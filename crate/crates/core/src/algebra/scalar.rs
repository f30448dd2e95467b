//! Integers modulo the subgroup order `q`.

use rand_core::RngCore;

use super::field::PrimeField;
use super::uint::{Uint, BYTES};
use super::AlgebraError;

/// Canonical representative in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar(pub(crate) Uint);

impl Scalar {
    pub fn as_uint(&self) -> &Uint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl core::fmt::Debug for Scalar {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Scalar(0x{:x})", self.0)
    }
}

/// `Z_q` for a prime `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField {
    field: PrimeField,
}

impl ScalarField {
    pub fn new(order: Uint) -> Result<Self, AlgebraError> {
        Ok(Self {
            field: PrimeField::new(order)?,
        })
    }

    pub fn order(&self) -> &Uint {
        self.field.modulus()
    }

    pub fn byte_len(&self) -> usize {
        self.field.byte_len()
    }

    pub fn zero(&self) -> Scalar {
        Scalar(Uint::ZERO)
    }

    pub fn one(&self) -> Scalar {
        Scalar(Uint::ONE)
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        self.reduce(&Uint::from_u64(v))
    }

    pub fn reduce(&self, v: &Uint) -> Scalar {
        Scalar(self.field.to_uint(&self.field.reduce(v)))
    }

    pub fn from_canonical(&self, v: &Uint) -> Option<Scalar> {
        (v < self.order()).then_some(Scalar(*v))
    }

    /// Interprets up to 64 big-endian bytes and reduces mod q.
    pub fn reduce_be_bytes(&self, bytes: &[u8]) -> Scalar {
        assert!(bytes.len() <= BYTES);
        self.reduce(&Uint::from_be_bytes(bytes).expect("fits"))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let (sum, carry) = a.0.carrying_add(&b.0);
        if carry || sum >= *self.order() {
            Scalar(sum.borrowing_sub(self.order()).0)
        } else {
            Scalar(sum)
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        if a.is_zero() {
            *a
        } else {
            Scalar(self.order().borrowing_sub(&a.0).0)
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let f = &self.field;
        let prod = f.mul(&f.reduce(&a.0), &f.reduce(&b.0));
        Scalar(f.to_uint(&prod))
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, AlgebraError> {
        let f = &self.field;
        Ok(Scalar(f.to_uint(&f.inv(&f.reduce(&a.0))?)))
    }

    /// Uniform nonzero scalar, via a 512-bit draw reduced mod q.
    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let mut wide = [0u8; BYTES];
            rng.fill_bytes(&mut wide);
            let s = self.reduce_be_bytes(&wide);
            if !s.is_zero() {
                return s;
            }
        }
    }
}
