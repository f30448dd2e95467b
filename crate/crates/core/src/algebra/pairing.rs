//! Modified Tate pairing `ê(S, T) = f_{q,S}(φ(T))^((p²−1)/q)` with the
//! distortion map `φ(x, y) = (−x, i·y)`.
//!
//! The Miller loop keeps the running point in Jacobian coordinates and
//! scales every line by a nonzero `F_p` factor; such factors, and all
//! vertical lines (whose value at `φ(T)` lies in `F_p`), are erased by the
//! `p − 1` part of the final exponentiation.

use super::counters::OpCounters;
use super::curve::{CurveParams, GroupElement, Jacobian};
use super::ext::{QuadExt, QuadExtElement};
use super::field::FieldElement;
use super::scalar::Scalar;
use super::uint::Uint;

/// An element of the order-q subgroup of `F_{p²}^*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TargetElement(pub(crate) QuadExtElement);

impl TargetElement {
    pub fn value(&self) -> &QuadExtElement {
        &self.0
    }
}

impl CurveParams {
    pub fn ext(&self) -> QuadExt<'_> {
        QuadExt::new(self.base_field())
    }

    /// Image of `T` under the distortion map, as `(x, y)` in `F_{p²}` with
    /// `x` real and `y` purely imaginary. Returns the real parts `(−x_T, y_T)`.
    pub fn distort(&self, t: &GroupElement) -> Option<(QuadExtElement, QuadExtElement)> {
        let f = self.base_field();
        t.coords().map(|(x, y)| {
            (
                QuadExtElement::new(f.neg(&x), f.zero()),
                QuadExtElement::new(f.zero(), y),
            )
        })
    }

    /// Counted pairing: one P.
    pub fn pairing(
        &self,
        a: &GroupElement,
        b: &GroupElement,
        ops: &mut OpCounters,
    ) -> TargetElement {
        ops.pairings += 1;
        self.pairing_uncounted(a, b)
    }

    pub(crate) fn pairing_uncounted(&self, a: &GroupElement, b: &GroupElement) -> TargetElement {
        let (Some(pa), Some(pb)) = (a.coords(), b.coords()) else {
            return self.gt_one();
        };
        let f = self.miller_loop(pa, pb);
        TargetElement(self.final_exponentiation(&f))
    }

    fn miller_loop(
        &self,
        (xp, yp): (FieldElement, FieldElement),
        (xq, yq): (FieldElement, FieldElement),
    ) -> QuadExtElement {
        let fp = self.base_field();
        let ext = self.ext();
        let q = self.q();
        let mut f = ext.one();
        let mut t = Jacobian {
            x: xp,
            y: yp,
            z: fp.one(),
        };
        for i in (0..q.bits() - 1).rev() {
            let (next, line) = self.double_step(&t, &xq, &yq);
            t = next;
            f = ext.mul(&ext.square(&f), &line);
            if q.bit(i) {
                match self.add_step(&t, &xp, &yp, &xq, &yq) {
                    Some((next, line)) => {
                        t = next;
                        f = ext.mul(&f, &line);
                    }
                    // vertical line: T = −P, only at the final bit
                    None => {
                        t = Jacobian {
                            x: fp.one(),
                            y: fp.one(),
                            z: fp.zero(),
                        }
                    }
                }
            }
        }
        f
    }

    /// Tangent at T evaluated at φ(Q), scaled by `2·Y·Z³`.
    fn double_step(
        &self,
        t: &Jacobian,
        xq: &FieldElement,
        yq: &FieldElement,
    ) -> (Jacobian, QuadExtElement) {
        let f = self.base_field();
        let xx = f.square(&t.x);
        let yy = f.square(&t.y);
        let zz = f.square(&t.z);
        let m = f.add(&f.mul_small(&xx, 3), &f.square(&zz));
        let next = self.jacobian_double(t);
        // c0 = M·(Z²·x_Q + X) − 2·Y²,  c1 = Z3·Z²·y_Q
        let c0 = f.sub(&f.mul(&m, &f.add(&f.mul(&zz, xq), &t.x)), &f.double(&yy));
        let c1 = f.mul(&f.mul(&next.z, &zz), yq);
        (next, QuadExtElement::new(c0, c1))
    }

    /// Chord through T and P evaluated at φ(Q), scaled by `2·Z·H`.
    fn add_step(
        &self,
        t: &Jacobian,
        xp: &FieldElement,
        yp: &FieldElement,
        xq: &FieldElement,
        yq: &FieldElement,
    ) -> Option<(Jacobian, QuadExtElement)> {
        let f = self.base_field();
        let z1z1 = f.square(&t.z);
        let u2 = f.mul(xp, &z1z1);
        let s2 = f.mul(&f.mul(yp, &t.z), &z1z1);
        let h = f.sub(&u2, &t.x);
        if f.is_zero(&h) {
            return None;
        }
        let r = f.double(&f.sub(&s2, &t.y));
        let next = self.jacobian_add_affine(t, xp, yp);
        // c0 = r·(x_Q + x_P) − Z3·y_P,  c1 = Z3·y_Q
        let c0 = f.sub(&f.mul(&r, &f.add(xq, xp)), &f.mul(&next.z, yp));
        let c1 = f.mul(&next.z, yq);
        Some((next, QuadExtElement::new(c0, c1)))
    }

    /// `f^((p²−1)/q) = (conj(f)/f)^((p+1)/q)`.
    fn final_exponentiation(&self, f: &QuadExtElement) -> QuadExtElement {
        let ext = self.ext();
        let inv = ext
            .inv(f)
            .expect("Miller value is nonzero for order-q inputs");
        let unitary = ext.mul(&ext.conjugate(f), &inv);
        ext.pow(&unitary, self.cofactor())
    }

    pub fn gt_one(&self) -> TargetElement {
        TargetElement(self.ext().one())
    }

    pub fn gt_is_one(&self, g: &TargetElement) -> bool {
        *g == self.gt_one()
    }

    pub fn gt_mul(&self, a: &TargetElement, b: &TargetElement) -> TargetElement {
        TargetElement(self.ext().mul(&a.0, &b.0))
    }

    /// Unitary elements invert by conjugation.
    pub fn gt_inverse(&self, a: &TargetElement) -> TargetElement {
        TargetElement(self.ext().conjugate(&a.0))
    }

    /// `g^k`; one E. Negative exponents are passed as their `Z_q` negation.
    pub fn gt_pow(&self, g: &TargetElement, k: &Scalar, ops: &mut OpCounters) -> TargetElement {
        ops.exponentiations += 1;
        self.gt_pow_uint(g, k.as_uint())
    }

    pub fn gt_pow_uint(&self, g: &TargetElement, k: &Uint) -> TargetElement {
        TargetElement(self.ext().pow(&g.0, k))
    }

    /// `value^q = 1` and `value ≠ 0`.
    pub fn gt_is_valid(&self, g: &TargetElement) -> bool {
        !self.ext().is_zero(&g.0) && self.gt_is_one(&self.gt_pow_uint(g, self.q()))
    }
}
