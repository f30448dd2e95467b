//! Naive arithmetic on `y² = x³ + x` over F_43 with plain `u64`s. Shares no
//! code with the library: inverses by exponentiation, multiplication by
//! repeated addition, and a textbook affine Miller loop that keeps every
//! vertical-line denominator.

#![allow(dead_code)]

use sha2::{Digest, Sha256};

pub const P: u64 = 43;
pub const Q: u64 = 11;
pub const COFACTOR: u64 = 4;

pub type Pt = Option<(u64, u64)>;
pub type F2 = (u64, u64);

pub fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    assert!(!a.is_multiple_of(P));
    pow(a, P - 2)
}

pub fn on_curve(pt: Pt) -> bool {
    match pt {
        None => true,
        Some((x, y)) => y * y % P == (x * x % P * x + x) % P,
    }
}

pub fn all_points() -> Vec<Pt> {
    let mut out = vec![None];
    for x in 0..P {
        for y in 0..P {
            if on_curve(Some((x, y))) {
                out.push(Some((x, y)));
            }
        }
    }
    out
}

pub fn neg(a: Pt) -> Pt {
    a.map(|(x, y)| (x, (P - y) % P))
}

pub fn add(a: Pt, b: Pt) -> Pt {
    let (Some((x1, y1)), Some((x2, y2))) = (a, b) else {
        return a.or(b);
    };
    let lambda = if x1 == x2 {
        if (y1 + y2) % P == 0 {
            return None;
        }
        (3 * x1 * x1 + 1) % P * inv(2 * y1) % P
    } else {
        (y2 + P - y1) % P * inv((x2 + P - x1) % P) % P
    };
    let x3 = (lambda * lambda % P + 2 * P - x1 - x2) % P;
    let y3 = (lambda * ((x1 + P - x3) % P) % P + P - y1) % P;
    Some((x3, y3))
}

pub fn mul(k: u64, a: Pt) -> Pt {
    (0..k).fold(None, |acc, _| add(acc, a))
}

pub fn order(a: Pt) -> u64 {
    let mut k = 1;
    let mut t = a;
    while t.is_some() {
        t = add(t, a);
        k += 1;
    }
    k
}

pub fn subgroup() -> Vec<Pt> {
    all_points()
        .into_iter()
        .filter(|&pt| mul(Q, pt).is_none())
        .collect()
}

// ---- F_43[i] ------------------------------------------------------------

pub fn f2_mul(a: F2, b: F2) -> F2 {
    (
        (a.0 * b.0 % P + P * P - a.1 * b.1 % P) % P,
        (a.0 * b.1 + a.1 * b.0) % P,
    )
}

pub fn f2_pow(a: F2, e: u64) -> F2 {
    (0..e).fold((1, 0), |acc, _| f2_mul(acc, a))
}

pub fn f2_inv(a: F2) -> F2 {
    let norm = (a.0 * a.0 + a.1 * a.1) % P;
    let ni = inv(norm);
    (a.0 * ni % P, (P - a.1) % P * ni % P)
}

fn f2(re: u64, im: u64) -> F2 {
    (re % P, im % P)
}

/// `ê(a, b) = f_{q,a}(φ(b))^((p²−1)/q)` with full line / vertical quotients.
pub fn tate(a: Pt, b: Pt) -> F2 {
    let (Some((xa, ya)), Some((xb, yb))) = (a, b) else {
        return (1, 0);
    };
    // φ(b) = (−xb, i·yb)
    let xq = f2(P - xb, 0);
    let yq = f2(0, yb);
    let eval_line = |t: (u64, u64), lambda: u64| -> F2 {
        // yq − yt − λ(xq − xt)
        let dx = ((xq.0 + P - t.0) % P, xq.1);
        let re = (yq.0 + P - t.1 + P - lambda * dx.0 % P) % P;
        let im = (yq.1 + P - lambda * dx.1 % P) % P;
        (re, im)
    };
    let eval_vertical = |x: u64| -> F2 { ((xq.0 + P - x) % P, xq.1) };

    let mut f: F2 = (1, 0);
    let mut t = (xa, ya);
    let mut t_inf = false;
    let bits = 64 - Q.leading_zeros();
    for i in (0..bits - 1).rev() {
        // doubling
        let lambda = (3 * t.0 * t.0 + 1) % P * inv(2 * t.1) % P;
        let l = eval_line(t, lambda);
        let t2 = add(Some(t), Some(t)).expect("odd order");
        let v = eval_vertical(t2.0);
        f = f2_mul(f2_mul(f2_mul(f, f), l), f2_inv(v));
        t = t2;
        if (Q >> i) & 1 == 1 {
            if t.0 == xa {
                // T = −a: the line is vertical and T + a = ∞
                f = f2_mul(f, eval_vertical(xa));
                t_inf = true;
            } else {
                let lambda = (ya + P - t.1) % P * inv((xa + P - t.0) % P) % P;
                let l = eval_line(t, lambda);
                let s = add(Some(t), a).expect("not vertical");
                f = f2_mul(f2_mul(f, l), f2_inv(eval_vertical(s.0)));
                t = s;
            }
        }
    }
    assert!(t_inf, "loop must end at infinity");
    f2_pow(f, (P * P - 1) / Q)
}

// ---- hashing -------------------------------------------------------------

/// Try-and-increment into the order-11 subgroup, mirroring the documented
/// layout: x from SHA-256(len(tag) ‖ tag ‖ counter ‖ 0x00 ‖ input)[..17].
pub fn hash_to_group(tag: &[u8], input: &[u8]) -> Pt {
    for counter in 0u32..256 {
        let digest = Sha256::new()
            .chain_update((tag.len() as u32).to_be_bytes())
            .chain_update(tag)
            .chain_update(counter.to_be_bytes())
            .chain_update([0u8])
            .chain_update(input)
            .finalize();
        let x = digest[..17]
            .iter()
            .fold(0u64, |acc, &b| (acc * 256 + b as u64) % P);
        let rhs = (x * x % P * x + x) % P;
        let y = pow(rhs, (P + 1) / 4);
        if y * y % P != rhs {
            continue;
        }
        let t = mul(COFACTOR, Some((x, y)));
        if t.is_some() {
            return t;
        }
    }
    panic!("retries exhausted")
}
