//! Prime-field arithmetic in Montgomery form with a runtime modulus.

use super::uint::{adc, mac, sbb, Uint, BITS, LIMBS};
use super::AlgebraError;

/// An element of a [`PrimeField`], stored in Montgomery form (`a·R mod p`
/// with `R = 2^512`). Only meaningful together with the field it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement(pub(crate) Uint);

impl core::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "FieldElement(mont {:x})", self.0)
    }
}

/// Montgomery context for an odd modulus below `2^512`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    modulus: Uint,
    /// `-modulus^{-1} mod 2^64`
    m_inv: u64,
    /// `R mod modulus`, i.e. one in Montgomery form.
    r: Uint,
    r2: Uint,
    bits: usize,
}

impl PrimeField {
    /// Builds the context. The modulus must be odd and at least 3; primality
    /// is the caller's concern (see [`super::primes`]).
    pub fn new(modulus: Uint) -> Result<Self, AlgebraError> {
        if !modulus.is_odd() || modulus < Uint::from_u64(3) {
            return Err(AlgebraError::InvalidParameters(
                "modulus must be odd and >= 3",
            ));
        }
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(modulus.0[0].wrapping_mul(inv)));
        }
        let mut r = Uint::ONE;
        for _ in 0..BITS {
            r = double_mod(&r, &modulus);
        }
        let mut r2 = r;
        for _ in 0..BITS {
            r2 = double_mod(&r2, &modulus);
        }
        Ok(Self {
            modulus,
            m_inv: inv.wrapping_neg(),
            r,
            r2,
            bits: modulus.bits(),
        })
    }

    pub fn modulus(&self) -> &Uint {
        &self.modulus
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Byte width of a canonical big-endian element.
    pub fn byte_len(&self) -> usize {
        self.bits.div_ceil(8)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(Uint::ZERO)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.r)
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.is_zero()
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        self.reduce(&Uint::from_u64(v))
    }

    /// Maps any 512-bit integer to its residue class.
    pub fn reduce(&self, v: &Uint) -> FieldElement {
        // v·R² / R = v·R, valid for any v < 2^512 because R² mod p < p.
        FieldElement(self.mont_mul(v, &self.r2))
    }

    /// Canonical element if `v < p`.
    pub fn from_canonical(&self, v: &Uint) -> Option<FieldElement> {
        (*v < self.modulus).then(|| self.reduce(v))
    }

    /// Reduces a big-endian byte string of at most 64 bytes.
    pub fn reduce_be_bytes(&self, bytes: &[u8]) -> FieldElement {
        let v = Uint::from_be_bytes(bytes).expect("at most 64 significant bytes");
        self.reduce(&v)
    }

    pub fn to_uint(&self, a: &FieldElement) -> Uint {
        self.mont_mul(&a.0, &Uint::ONE)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let (sum, carry) = a.0.carrying_add(&b.0);
        FieldElement(self.sub_if_needed(sum, carry))
    }

    pub fn double(&self, a: &FieldElement) -> FieldElement {
        self.add(a, a)
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let (diff, borrow) = a.0.borrowing_sub(&b.0);
        if borrow {
            FieldElement(diff.carrying_add(&self.modulus).0)
        } else {
            FieldElement(diff)
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        if a.0.is_zero() {
            *a
        } else {
            FieldElement(self.modulus.borrowing_sub(&a.0).0)
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(self.mont_mul(&a.0, &b.0))
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn mul_small(&self, a: &FieldElement, k: u64) -> FieldElement {
        self.mul(a, &self.from_u64(k))
    }

    pub fn pow(&self, a: &FieldElement, exp: &Uint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(&acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Inverse by Fermat's little theorem (the modulus must be prime).
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, AlgebraError> {
        if a.0.is_zero() {
            return Err(AlgebraError::InverseOfZero);
        }
        let exp = self.modulus.borrowing_sub(&Uint::from_u64(2)).0;
        Ok(self.pow(a, &exp))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        if a.0.is_zero() {
            return true;
        }
        let exp = self.modulus.shr(1);
        self.pow(a, &exp) == self.one()
    }

    /// Square root `a^((p+1)/4)`; requires `p ≡ 3 (mod 4)`.
    pub fn sqrt(&self, a: &FieldElement) -> Result<FieldElement, AlgebraError> {
        debug_assert_eq!(self.modulus.0[0] & 3, 3);
        let exp = self.modulus.carrying_add(&Uint::ONE).0.shr(2);
        let root = self.pow(a, &exp);
        if self.square(&root) == *a {
            Ok(root)
        } else {
            Err(AlgebraError::NonResidue)
        }
    }

    pub fn is_odd(&self, a: &FieldElement) -> bool {
        self.to_uint(a).is_odd()
    }

    #[inline]
    fn sub_if_needed(&self, v: Uint, carry: bool) -> Uint {
        if carry || v >= self.modulus {
            v.borrowing_sub(&self.modulus).0
        } else {
            v
        }
    }

    /// CIOS Montgomery multiplication: `a·b·R^{-1} mod p`, valid whenever
    /// `a·b < p·R`.
    #[inline]
    pub(crate) fn mont_mul(&self, a: &Uint, b: &Uint) -> Uint {
        let p = &self.modulus.0;
        let mut t = [0u64; LIMBS + 2];
        for i in 0..LIMBS {
            let mut carry = 0;
            for j in 0..LIMBS {
                (t[j], carry) = mac(t[j], a.0[j], b.0[i], carry);
            }
            let (s, c) = adc(t[LIMBS], carry, 0);
            t[LIMBS] = s;
            t[LIMBS + 1] = c;

            let m = t[0].wrapping_mul(self.m_inv);
            let (_, mut carry) = mac(t[0], m, p[0], 0);
            for j in 1..LIMBS {
                (t[j - 1], carry) = mac(t[j], m, p[j], carry);
            }
            let (s, c) = adc(t[LIMBS], carry, 0);
            t[LIMBS - 1] = s;
            t[LIMBS] = t[LIMBS + 1] + c;
        }
        let mut out = [0u64; LIMBS];
        out.copy_from_slice(&t[..LIMBS]);
        self.sub_if_needed(Uint(out), t[LIMBS] != 0)
    }
}

fn double_mod(v: &Uint, m: &Uint) -> Uint {
    let (d, carry) = v.carrying_add(v);
    if carry || d >= *m {
        let mut out = [0u64; LIMBS];
        let mut borrow = 0;
        for i in 0..LIMBS {
            (out[i], borrow) = sbb(d.0[i], m.0[i], borrow);
        }
        Uint(out)
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f43() -> PrimeField {
        PrimeField::new(Uint::from_u64(43)).unwrap()
    }

    fn val(f: &PrimeField, a: &FieldElement) -> u64 {
        f.to_uint(a).0[0]
    }

    #[test]
    fn rejects_even_modulus() {
        assert!(PrimeField::new(Uint::from_u64(44)).is_err());
        assert!(PrimeField::new(Uint::ONE).is_err());
    }

    #[test]
    fn toy_inverse_fixtures() {
        let f = f43();
        assert_eq!(val(&f, &f.inv(&f.one()).unwrap()), 1);
        // brute force over F_43: the unique b with 6·b ≡ 1
        let brute = (1..43u64).find(|b| 6 * b % 43 == 1).unwrap();
        assert_eq!(brute, 36);
        assert_eq!(val(&f, &f.mul(&f.from_u64(6), &f.from_u64(36))), 1);
        assert_eq!(val(&f, &f.inv(&f.from_u64(6)).unwrap()), 36);
        assert_eq!(f.inv(&f.zero()), Err(AlgebraError::InverseOfZero));
    }

    #[test]
    fn toy_arithmetic_matches_u64_exhaustively() {
        let f = f43();
        for a in 0..43u64 {
            for b in 0..43u64 {
                let (fa, fb) = (f.from_u64(a), f.from_u64(b));
                assert_eq!(val(&f, &f.add(&fa, &fb)), (a + b) % 43);
                assert_eq!(val(&f, &f.sub(&fa, &fb)), (a + 43 - b) % 43);
                assert_eq!(val(&f, &f.mul(&fa, &fb)), a * b % 43);
            }
            assert_eq!(val(&f, &f.neg(&f.from_u64(a))), (43 - a) % 43);
        }
    }

    #[test]
    fn toy_sqrt_matches_residue_table() {
        let f = f43();
        let squares: alloc::vec::Vec<u64> = (0..43u64).map(|y| y * y % 43).collect();
        for a in 0..43u64 {
            let is_res = squares.contains(&a);
            let euler = (1..=21).fold(1u64, |acc, _| acc * a % 43);
            if a != 0 {
                assert_eq!(is_res, euler == 1, "a = {a}");
            }
            match f.sqrt(&f.from_u64(a)) {
                Ok(r) => {
                    assert!(is_res);
                    assert_eq!(val(&f, &r) * val(&f, &r) % 43, a);
                }
                Err(e) => {
                    assert!(!is_res);
                    assert_eq!(e, AlgebraError::NonResidue);
                }
            }
        }
        // 41 ≡ -2 and 43 ≡ 3 mod 8, so -2 is a residue: 41^21 mod 43 = 1
        assert!(f.is_square(&f.from_u64(41)));
    }

    #[test]
    fn reduce_accepts_full_width_input() {
        let f = f43();
        let v = Uint([u64::MAX; LIMBS]);
        // 2^512 - 1 mod 43
        let mut expect = 1u64;
        for _ in 0..512 {
            expect = expect * 2 % 43;
        }
        let expect = (expect + 42) % 43;
        assert_eq!(val(&f, &f.reduce(&v)), expect);
    }
}
