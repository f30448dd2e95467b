//! The quadratic extension `F_p[i] / (i² + 1)`, valid for `p ≡ 3 (mod 4)`.

use super::field::{FieldElement, PrimeField};
use super::uint::Uint;
use super::AlgebraError;

/// `c0 + c1·i` with `i² = −1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadExtElement {
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl QuadExtElement {
    pub fn new(c0: FieldElement, c1: FieldElement) -> Self {
        Self { c0, c1 }
    }
}

/// Arithmetic over the extension, borrowing the base field context.
#[derive(Clone, Copy)]
pub struct QuadExt<'a> {
    pub base: &'a PrimeField,
}

impl<'a> QuadExt<'a> {
    pub fn new(base: &'a PrimeField) -> Self {
        Self { base }
    }

    pub fn one(&self) -> QuadExtElement {
        QuadExtElement::new(self.base.one(), self.base.zero())
    }

    pub fn zero(&self) -> QuadExtElement {
        QuadExtElement::new(self.base.zero(), self.base.zero())
    }

    pub fn is_zero(&self, a: &QuadExtElement) -> bool {
        self.base.is_zero(&a.c0) && self.base.is_zero(&a.c1)
    }

    pub fn add(&self, a: &QuadExtElement, b: &QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(self.base.add(&a.c0, &b.c0), self.base.add(&a.c1, &b.c1))
    }

    pub fn sub(&self, a: &QuadExtElement, b: &QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(self.base.sub(&a.c0, &b.c0), self.base.sub(&a.c1, &b.c1))
    }

    /// Karatsuba: three base multiplications.
    pub fn mul(&self, a: &QuadExtElement, b: &QuadExtElement) -> QuadExtElement {
        let f = self.base;
        let v0 = f.mul(&a.c0, &b.c0);
        let v1 = f.mul(&a.c1, &b.c1);
        let cross = f.mul(&f.add(&a.c0, &a.c1), &f.add(&b.c0, &b.c1));
        QuadExtElement::new(f.sub(&v0, &v1), f.sub(&f.sub(&cross, &v0), &v1))
    }

    pub fn square(&self, a: &QuadExtElement) -> QuadExtElement {
        let f = self.base;
        let re = f.mul(&f.add(&a.c0, &a.c1), &f.sub(&a.c0, &a.c1));
        let im = f.double(&f.mul(&a.c0, &a.c1));
        QuadExtElement::new(re, im)
    }

    /// Complex conjugation, which is also the p-power Frobenius.
    pub fn conjugate(&self, a: &QuadExtElement) -> QuadExtElement {
        QuadExtElement::new(a.c0, self.base.neg(&a.c1))
    }

    pub fn inv(&self, a: &QuadExtElement) -> Result<QuadExtElement, AlgebraError> {
        let f = self.base;
        let norm = f.add(&f.square(&a.c0), &f.square(&a.c1));
        let n_inv = f.inv(&norm)?;
        Ok(QuadExtElement::new(
            f.mul(&a.c0, &n_inv),
            f.neg(&f.mul(&a.c1, &n_inv)),
        ))
    }

    pub fn pow(&self, a: &QuadExtElement, exp: &Uint) -> QuadExtElement {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(&acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook product of (a0 + a1 X)(b0 + b1 X) reduced mod X² + 1, in u64.
    fn schoolbook(a: (u64, u64), b: (u64, u64), p: u64) -> (u64, u64) {
        let x0 = a.0 * b.0;
        let x1 = a.0 * b.1 + a.1 * b.0;
        let x2 = a.1 * b.1;
        ((x0 + p * p - x2) % p, x1 % p)
    }

    #[test]
    fn toy_mul_matches_polynomial_reduction() {
        let base = PrimeField::new(Uint::from_u64(43)).unwrap();
        let ext = QuadExt::new(&base);
        let lift = |a: (u64, u64)| QuadExtElement::new(base.from_u64(a.0), base.from_u64(a.1));
        let lower = |a: &QuadExtElement| {
            (
                base.to_uint(&a.c0).limbs()[0],
                base.to_uint(&a.c1).limbs()[0],
            )
        };
        for a0 in (0..43).step_by(5) {
            for a1 in (0..43).step_by(3) {
                for b0 in (0..43).step_by(7) {
                    for b1 in (0..43).step_by(4) {
                        let (a, b) = ((a0, a1), (b0, b1));
                        let got = ext.mul(&lift(a), &lift(b));
                        assert_eq!(lower(&got), schoolbook(a, b, 43));
                        assert_eq!(lower(&ext.square(&lift(a))), schoolbook(a, a, 43));
                        if a != (0, 0) {
                            let inv = ext.inv(&lift(a)).unwrap();
                            assert_eq!(ext.mul(&inv, &lift(a)), ext.one());
                        }
                    }
                }
            }
        }
        assert!(ext.inv(&ext.zero()).is_err());
    }

    #[test]
    fn conjugation_is_frobenius_on_toy_field() {
        let base = PrimeField::new(Uint::from_u64(43)).unwrap();
        let ext = QuadExt::new(&base);
        let a = QuadExtElement::new(base.from_u64(17), base.from_u64(29));
        assert_eq!(ext.pow(&a, &Uint::from_u64(43)), ext.conjugate(&a));
    }
}
