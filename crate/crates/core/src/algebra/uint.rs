//! Fixed-width 512-bit unsigned integers.
//!
//! Limbs are little-endian `u64`s. Every modulus used by the crate (base
//! field primes and subgroup orders) fits in this width; the Montgomery
//! layer in [`super::field`] is built on top of it.

use core::cmp::Ordering;
use core::fmt;

pub const LIMBS: usize = 8;
pub const BITS: usize = LIMBS * 64;
pub const BYTES: usize = LIMBS * 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Uint(pub(crate) [u64; LIMBS]);

#[inline(always)]
pub(crate) const fn mac(acc: u64, a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = (acc as u128) + (a as u128) * (b as u128) + (carry as u128);
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
pub(crate) const fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = (a as u128) + (b as u128) + (carry as u128);
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
pub(crate) const fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128).wrapping_sub((b as u128) + (borrow as u128));
    (t as u64, ((t >> 64) as u64) & 1)
}

impl Uint {
    pub const ZERO: Self = Self([0; LIMBS]);
    pub const ONE: Self = Self::from_u64(1);

    pub const fn from_u64(v: u64) -> Self {
        let mut limbs = [0u64; LIMBS];
        limbs[0] = v;
        Self(limbs)
    }

    pub const fn from_limbs(limbs: [u64; LIMBS]) -> Self {
        Self(limbs)
    }

    pub fn limbs(&self) -> &[u64; LIMBS] {
        &self.0
    }

    /// Parses big-endian bytes; `None` if the value needs more than 512 bits.
    pub fn from_be_bytes(bytes: &[u8]) -> Option<Self> {
        let significant = bytes
            .iter()
            .position(|&b| b != 0)
            .map_or(&[][..], |i| &bytes[i..]);
        if significant.len() > BYTES {
            return None;
        }
        let mut out = [0u64; LIMBS];
        for (i, &byte) in significant.iter().rev().enumerate() {
            out[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        Some(Self(out))
    }

    pub fn to_be_bytes(&self) -> [u8; BYTES] {
        let mut out = [0u8; BYTES];
        for (i, limb) in self.0.iter().enumerate() {
            out[BYTES - 8 * (i + 1)..BYTES - 8 * i].copy_from_slice(&limb.to_be_bytes());
        }
        out
    }

    /// Writes the value big-endian into `out`, left-padded with zeros.
    ///
    /// Panics if the value does not fit in `out.len()` bytes.
    pub fn write_be(&self, out: &mut [u8]) {
        let full = self.to_be_bytes();
        let skip = BYTES.saturating_sub(out.len());
        assert!(
            full[..skip].iter().all(|&b| b == 0),
            "value wider than output buffer"
        );
        let pad = out.len().saturating_sub(BYTES);
        out[..pad].fill(0);
        out[pad..].copy_from_slice(&full[skip..]);
    }

    /// Parses a hex string (no prefix, whitespace and `_` ignored).
    pub fn from_hex(s: &str) -> Option<Self> {
        let mut out = Self::ZERO;
        let mut digits = 0usize;
        for c in s.chars() {
            if c.is_whitespace() || c == '_' {
                continue;
            }
            let d = c.to_digit(16)? as u64;
            if out.0[LIMBS - 1] >> 60 != 0 {
                return None;
            }
            out = out.shl(4);
            out.0[0] |= d;
            digits += 1;
        }
        (digits > 0).then_some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.0[0] & 1 == 1
    }

    pub fn bits(&self) -> usize {
        for i in (0..LIMBS).rev() {
            if self.0[i] != 0 {
                return 64 * i + (64 - self.0[i].leading_zeros() as usize);
            }
        }
        0
    }

    pub fn bit(&self, i: usize) -> bool {
        i < BITS && (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn carrying_add(&self, rhs: &Self) -> (Self, bool) {
        let mut out = [0u64; LIMBS];
        let mut carry = 0;
        for i in 0..LIMBS {
            (out[i], carry) = adc(self.0[i], rhs.0[i], carry);
        }
        (Self(out), carry != 0)
    }

    pub fn borrowing_sub(&self, rhs: &Self) -> (Self, bool) {
        let mut out = [0u64; LIMBS];
        let mut borrow = 0;
        for i in 0..LIMBS {
            (out[i], borrow) = sbb(self.0[i], rhs.0[i], borrow);
        }
        (Self(out), borrow != 0)
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        match self.carrying_add(rhs) {
            (v, false) => Some(v),
            _ => None,
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        match self.borrowing_sub(rhs) {
            (v, false) => Some(v),
            _ => None,
        }
    }

    /// Full product as `(low, high)` halves.
    pub fn widening_mul(&self, rhs: &Self) -> (Self, Self) {
        let mut t = [0u64; 2 * LIMBS];
        for i in 0..LIMBS {
            let mut carry = 0;
            for j in 0..LIMBS {
                (t[i + j], carry) = mac(t[i + j], self.0[i], rhs.0[j], carry);
            }
            t[i + LIMBS] = carry;
        }
        let mut lo = [0u64; LIMBS];
        let mut hi = [0u64; LIMBS];
        lo.copy_from_slice(&t[..LIMBS]);
        hi.copy_from_slice(&t[LIMBS..]);
        (Self(lo), Self(hi))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let (lo, hi) = self.widening_mul(rhs);
        hi.is_zero().then_some(lo)
    }

    pub fn shl(&self, n: usize) -> Self {
        if n >= BITS {
            return Self::ZERO;
        }
        let (words, bits) = (n / 64, n % 64);
        let mut out = [0u64; LIMBS];
        for i in (words..LIMBS).rev() {
            out[i] = self.0[i - words] << bits;
            if bits > 0 && i > words {
                out[i] |= self.0[i - words - 1] >> (64 - bits);
            }
        }
        Self(out)
    }

    pub fn shr(&self, n: usize) -> Self {
        if n >= BITS {
            return Self::ZERO;
        }
        let (words, bits) = (n / 64, n % 64);
        let mut out = [0u64; LIMBS];
        for i in 0..LIMBS - words {
            out[i] = self.0[i + words] >> bits;
            if bits > 0 && i + words + 1 < LIMBS {
                out[i] |= self.0[i + words + 1] << (64 - bits);
            }
        }
        Self(out)
    }

    /// Schoolbook binary long division. Slow; used only for parameter
    /// handling, never on a hot path.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero");
        let mut quotient = Self::ZERO;
        let mut rem = Self::ZERO;
        for i in (0..self.bits()).rev() {
            let top = rem.bit(BITS - 1);
            rem = rem.shl(1);
            if self.bit(i) {
                rem.0[0] |= 1;
            }
            if top || rem >= *divisor {
                rem = rem.borrowing_sub(divisor).0;
                quotient.set_bit(i);
            }
        }
        (quotient, rem)
    }

    pub fn rem_u64(&self, m: u64) -> u64 {
        let mut r: u128 = 0;
        for &limb in self.0.iter().rev() {
            r = ((r << 64) | limb as u128) % m as u128;
        }
        r as u64
    }
}

impl Ord for Uint {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..LIMBS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Uint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::LowerHex for Uint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = (0..LIMBS).rev().find(|&i| self.0[i] != 0).unwrap_or(0);
        write!(f, "{:x}", self.0[top])?;
        for i in (0..top).rev() {
            write!(f, "{:016x}", self.0[i])?;
        }
        Ok(())
    }
}

impl fmt::Debug for Uint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self)
    }
}

impl From<u64> for Uint {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}
