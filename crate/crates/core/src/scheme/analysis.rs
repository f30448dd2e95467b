use alloc::vec::Vec;

use rand_core::{CryptoRng, RngCore};

use super::{
    Delegation, MultiProxySignature, PartialSignature, ProxyKey, SchemeError, SystemParams,
    UserKeyPair, Warrant,
};
use crate::algebra::{GroupElement, OpCounters, TargetElement};

/// Everything an honest run produced, with per-signer slices in warrant
/// order.
#[derive(Clone, Copy, Debug)]
pub struct TraceInputs<'a> {
    pub signature: &'a MultiProxySignature,
    pub delegation: &'a Delegation,
    pub original: &'a UserKeyPair,
    pub proxies: &'a [UserKeyPair],
    pub proxy_keys: &'a [ProxyKey],
    pub partials: &'a [PartialSignature],
    pub verifier: &'a UserKeyPair,
}

/// Evaluates the left side of the verification equation five ways, each
/// substituting one more layer of secrets:
///
/// 1. as the verifier computes it, from `Σ(Q_Pi + Q_A)` and `S_C`;
/// 2. with `X = Σ X_Pi` and `e(Q, S_C) = e(S, Q_C)`;
/// 3. with `X_Pi = H·S_Pi + Z_Pi`;
/// 4. with `S_Pi = V + h·S_IDPi`;
/// 5. with `V = U + h·S_A`, the exponent folded into the point.
///
/// For an honest run all five equal `e(Z_P, Q_C)`. Counters are local and
/// discarded.
pub fn correctness_trace(
    params: &SystemParams,
    t: &TraceInputs<'_>,
) -> Result<[TargetElement; 5], SchemeError> {
    let n = t.signature.warrant.signer_count();
    if t.proxies.len() != n || t.proxy_keys.len() != n || t.partials.len() != n {
        return Err(SchemeError::SignerCountMismatch {
            expected: n,
            found: t.proxies.len(),
        });
    }
    let ops = &mut OpCounters::new();
    let curve = params.curve();
    let fr = curve.scalar_field();
    let q_c = &t.verifier.public;
    let s_c = &t.verifier.secret;
    let sig = t.signature;
    let m_w = sig.warrant.encoded();

    let h = params.h2(m_w, &sig.u, ops);
    let big_h = params.h2(m_w, &sig.z, ops);
    let hh = fr.mul(&h, &big_h);
    let neg_hh = fr.neg(&hh);
    let nhu = curve.scalar_mul(&fr.mul(&fr.from_u64(n as u64), &big_h), &sig.u, ops);
    let sum = |items: Vec<GroupElement>| curve.sum(items.iter());
    let e = |a: &GroupElement, b: &GroupElement| curve.pairing_uncounted(a, b);
    let powed = |g: TargetElement| curve.gt_pow_uint(&g, neg_hh.as_uint());

    let sum_q = sum(t
        .proxies
        .iter()
        .map(|k| curve.add(&k.public, &t.original.public))
        .collect());
    let sum_s = sum(t
        .proxies
        .iter()
        .map(|k| curve.add(&k.secret, &t.original.secret))
        .collect());
    let tail = powed(e(&sum_s, q_c));

    let line1 = curve.gt_mul(&e(&curve.sub(&sig.x, &nhu), q_c), &powed(e(&sum_q, s_c)));

    let sum_x = sum(t.partials.iter().map(|p| p.x).collect());
    let line2 = curve.gt_mul(&e(&curve.sub(&sum_x, &nhu), q_c), &tail);

    let expanded_x = sum(t
        .proxy_keys
        .iter()
        .zip(t.partials)
        .map(|(k, p)| curve.add(&curve.scalar_mul(&big_h, &k.secret, ops), &p.z))
        .collect());
    let line3 = curve.gt_mul(&e(&curve.sub(&expanded_x, &nhu), q_c), &tail);

    let v = &t.delegation.v;
    let via_v = sum(t
        .proxies
        .iter()
        .map(|k| {
            let s_p = curve.add(v, &curve.scalar_mul(&h, &k.secret, ops));
            curve.scalar_mul(&big_h, &s_p, ops)
        })
        .collect());
    let line4 = curve.gt_mul(&e(&curve.sub(&curve.add(&via_v, &sig.z), &nhu), q_c), &tail);

    let h_sa = curve.scalar_mul(&h, &t.original.secret, ops);
    let via_u = sum(t
        .proxies
        .iter()
        .map(|k| {
            let inner = curve.add(
                &curve.add(&sig.u, &h_sa),
                &curve.scalar_mul(&h, &k.secret, ops),
            );
            curve.scalar_mul(&big_h, &inner, ops)
        })
        .collect());
    let folded = curve.scalar_mul(&neg_hh, &sum_s, ops);
    let line5 = curve.gt_mul(
        &e(&curve.sub(&curve.add(&via_u, &sig.z), &nhu), q_c),
        &e(&folded, q_c),
    );

    Ok([line1, line2, line3, line4, line5])
}

/// An original signer acting alone: it knows `V`, so it can use `V` in
/// place of every `S_Pi`. Used to show such a signature is rejected.
pub fn forge_without_proxy_secrets<R: RngCore + CryptoRng + ?Sized>(
    params: &SystemParams,
    original: &UserKeyPair,
    warrant: Warrant,
    verifier_pub: &GroupElement,
    rng: &mut R,
    ops: &mut OpCounters,
) -> Result<MultiProxySignature, SchemeError> {
    let delegation = super::delegate(params, original, verifier_pub, warrant, rng, ops)?;
    let curve = params.curve();
    let fr = curve.scalar_field();
    let m_w = delegation.warrant.encoded();
    let nonces: Vec<GroupElement> = (0..delegation.warrant.signer_count())
        .map(|_| curve.scalar_mul(&fr.random_nonzero(rng), verifier_pub, ops))
        .collect();
    let z = curve.sum(nonces.iter());
    let big_h = params.h2(m_w, &z, ops);
    let hv = curve.scalar_mul(&big_h, &delegation.v, ops);
    let x = curve.sum(
        nonces
            .iter()
            .map(|z_i| curve.add(&hv, z_i))
            .collect::<Vec<_>>()
            .iter(),
    );
    Ok(MultiProxySignature {
        warrant: delegation.warrant,
        z,
        x,
        u: delegation.u,
    })
}
