//! Primality testing and generation of supersingular curve parameters.
//!
//! The curve `y² = x³ + x` over `F_p` is supersingular for `p ≡ 3 (mod 4)`
//! and has `p + 1` points. We search for a prime `q` and a cofactor `c` with
//! `4 | c` so that `p = c·q − 1` is prime; then `q | #E(F_p)` and the
//! embedding degree is 2.

use rand_core::RngCore;

use super::field::PrimeField;
use super::uint::{Uint, BITS};

const SMALL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Miller-Rabin rounds used when generating or validating parameters.
pub const MR_ROUNDS: usize = 32;

/// Trial division followed by Miller-Rabin with the first `rounds` primes
/// as bases (deterministic for values below 3.3·10^24, probabilistic above).
pub fn is_probable_prime(n: &Uint, rounds: usize) -> bool {
    if *n < Uint::from_u64(2) {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        if *n == Uint::from_u64(sp) {
            return true;
        }
        if n.rem_u64(sp) == 0 {
            return false;
        }
    }
    let field = PrimeField::new(*n).expect("odd modulus");
    let n_minus_1 = n.borrowing_sub(&Uint::ONE).0;
    let mut d = n_minus_1;
    let mut s = 0;
    while !d.is_odd() {
        d = d.shr(1);
        s += 1;
    }
    let one = field.one();
    let minus_one = field.neg(&one);
    'bases: for &base in SMALL_PRIMES.iter().take(rounds.min(SMALL_PRIMES.len())) {
        let mut x = field.pow(&field.from_u64(base), &d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = field.square(&x);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn random_bits<R: RngCore + ?Sized>(rng: &mut R, bits: usize) -> Uint {
    assert!(bits > 0 && bits <= BITS);
    let mut bytes = [0u8; 64];
    rng.fill_bytes(&mut bytes);
    let v = Uint::from_be_bytes(&bytes)
        .expect("64 bytes fit")
        .shr(BITS - bits);
    let mut v = v;
    v.set_bit(bits - 1);
    v
}

/// Output of [`generate_supersingular_params`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedParams {
    pub p: Uint,
    pub q: Uint,
    pub cofactor: Uint,
}

/// Finds `(p, q, c)` with `q` a `q_bits`-bit prime, `p = c·q − 1` a
/// `p_bits`-bit prime, `p ≡ 3 (mod 4)` and `q ∤ c`.
pub fn generate_supersingular_params<R: RngCore + ?Sized>(
    rng: &mut R,
    p_bits: usize,
    q_bits: usize,
) -> GeneratedParams {
    assert!(
        q_bits >= 3 && p_bits > q_bits + 2 && p_bits <= BITS,
        "unsupported bit sizes"
    );
    let q = loop {
        let mut cand = random_bits(rng, q_bits);
        cand.set_bit(0);
        if is_probable_prime(&cand, MR_ROUNDS) {
            break cand;
        }
    };
    let c_bits = p_bits - q_bits + 1;
    loop {
        let mut c = random_bits(rng, c_bits);
        c.0[0] &= !3;
        if c.is_zero() || c.div_rem(&q).1.is_zero() {
            continue;
        }
        let Some(cq) = c.checked_mul(&q) else {
            continue;
        };
        let p = cq.borrowing_sub(&Uint::ONE).0;
        if p.bits() != p_bits {
            continue;
        }
        if is_probable_prime(&p, MR_ROUNDS) {
            return GeneratedParams { p, q, cofactor: c };
        }
    }
}
