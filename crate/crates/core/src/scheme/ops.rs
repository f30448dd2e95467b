use rand_core::{CryptoRng, RngCore};
use sha2::{Digest, Sha512};

use super::{
    check_signer_set, CommitSecret, Commitment, Delegation, Identity, MasterSecret,
    MultiProxySignature, PartialSignature, PolicyViolation, ProxyKey, SchemeError, SystemParams,
    UserKeyPair, Verdict, Warrant, SETUP_TAG,
};
use crate::algebra::{CurveParams, GroupElement, OpCounters, Scalar};

/// Builds the named parameter set and derives `s` from `master_seed`.
pub fn setup(
    param_set: &str,
    master_seed: &[u8],
) -> Result<(SystemParams, MasterSecret), SchemeError> {
    setup_with_curve(CurveParams::by_name(param_set)?, master_seed)
}

/// `s = SHA-512(tag ‖ counter ‖ seed) mod q`, retrying on zero.
pub fn setup_with_curve(
    curve: CurveParams,
    master_seed: &[u8],
) -> Result<(SystemParams, MasterSecret), SchemeError> {
    if master_seed.is_empty() {
        return Err(SchemeError::EmptySeed);
    }
    let fr = curve.scalar_field();
    let s = (0u32..)
        .map(|counter| {
            let digest = Sha512::new()
                .chain_update((SETUP_TAG.len() as u32).to_be_bytes())
                .chain_update(SETUP_TAG)
                .chain_update(counter.to_be_bytes())
                .chain_update(master_seed)
                .finalize();
            fr.reduce_be_bytes(&digest)
        })
        .find(|s| !s.is_zero())
        .expect("a nonzero reduction exists");
    let p_pub = curve.mul_uint(s.as_uint(), curve.generator());
    Ok((SystemParams { curve, p_pub }, MasterSecret(s)))
}

/// `Q_ID = H1(ID)`, `S_ID = s·Q_ID`. One H, one M.
pub fn extract_key(
    params: &SystemParams,
    master: &MasterSecret,
    identity: &Identity,
    ops: &mut OpCounters,
) -> Result<UserKeyPair, SchemeError> {
    let public = params.public_key(identity, ops)?;
    let secret = params.curve.scalar_mul(&master.0, &public, ops);
    Ok(UserKeyPair {
        identity: identity.clone(),
        public,
        secret,
    })
}

/// Original signer's step. `verifier_pub` must be `H1` of the warrant's
/// designated verifier. One H, two M.
pub fn delegate<R: RngCore + CryptoRng + ?Sized>(
    params: &SystemParams,
    original: &UserKeyPair,
    verifier_pub: &GroupElement,
    warrant: Warrant,
    rng: &mut R,
    ops: &mut OpCounters,
) -> Result<Delegation, SchemeError> {
    if warrant.original_signer() != &original.identity {
        return Err(SchemeError::IdentityMismatch {
            expected: warrant.original_signer().clone(),
            found: original.identity.clone(),
        });
    }
    let curve = &params.curve;
    let r = curve.scalar_field().random_nonzero(rng);
    let u = curve.scalar_mul(&r, verifier_pub, ops);
    let h = params.h2(warrant.encoded(), &u, ops);
    let v = curve.add(&curve.scalar_mul(&h, &original.secret, ops), &u);
    Ok(Delegation { warrant, u, v })
}

/// `e(V, P) = e(Q_A, P_pub)^h · e(U, P)`. One H, three P, one E.
pub fn verify_delegation(
    params: &SystemParams,
    delegation: &Delegation,
    original_pub: &GroupElement,
    ops: &mut OpCounters,
) -> Verdict {
    Verdict::from_bool(delegation_hash_if_valid(params, delegation, original_pub, ops).is_some())
}

fn delegation_hash_if_valid(
    params: &SystemParams,
    d: &Delegation,
    original_pub: &GroupElement,
    ops: &mut OpCounters,
) -> Option<Scalar> {
    let curve = &params.curve;
    let p = params.generator();
    let h = params.h2(d.warrant.encoded(), &d.u, ops);
    let lhs = curve.pairing(&d.v, p, ops);
    let base = curve.pairing(original_pub, &params.p_pub, ops);
    let rhs = curve.gt_mul(&curve.gt_pow(&base, &h, ops), &curve.pairing(&d.u, p, ops));
    (lhs == rhs && !d.u.is_infinity()).then_some(h)
}

/// Verifies the delegation and returns `S_Pi = h·S_IDPi + V`.
/// One H, three P, one E, one M.
pub fn derive_proxy_key(
    params: &SystemParams,
    delegation: &Delegation,
    proxy: &UserKeyPair,
    original_pub: &GroupElement,
    ops: &mut OpCounters,
) -> Result<ProxyKey, SchemeError> {
    if !delegation.warrant.names_proxy(&proxy.identity) {
        return Err(PolicyViolation::NotInWarrant(proxy.identity.clone()).into());
    }
    let h = delegation_hash_if_valid(params, delegation, original_pub, ops)
        .ok_or(SchemeError::DelegationRejected)?;
    let curve = &params.curve;
    let secret = curve.add(&curve.scalar_mul(&h, &proxy.secret, ops), &delegation.v);
    Ok(ProxyKey {
        holder: proxy.identity.clone(),
        secret,
        delegation: delegation.clone(),
        h,
    })
}

/// First round: `Z_Pi = t_i·Q_C`. One M.
pub fn commit<R: RngCore + CryptoRng + ?Sized>(
    params: &SystemParams,
    proxy: &ProxyKey,
    verifier_pub: &GroupElement,
    rng: &mut R,
    ops: &mut OpCounters,
) -> (Commitment, CommitSecret) {
    let curve = &params.curve;
    let t = curve.scalar_field().random_nonzero(rng);
    let z = curve.scalar_mul(&t, verifier_pub, ops);
    (
        Commitment {
            signer: proxy.holder.clone(),
            z,
        },
        CommitSecret { t, z },
    )
}

/// Second round: `H = H2(m_w ‖ Z_P)`, `X_Pi = H·S_Pi + Z_Pi`. Needs exactly
/// one commitment from every warrant signer. One H, one M.
pub fn partial_sign(
    params: &SystemParams,
    proxy: &ProxyKey,
    secret: &CommitSecret,
    all_commitments: &[Commitment],
    ops: &mut OpCounters,
) -> Result<PartialSignature, SchemeError> {
    let warrant = proxy.warrant();
    check_signer_set(warrant, all_commitments.iter().map(|c| &c.signer))?;
    let own = all_commitments
        .iter()
        .find(|c| c.signer == proxy.holder)
        .ok_or_else(|| SchemeError::MissingSigner(proxy.holder.clone()))?;
    if own.z != secret.z {
        return Err(SchemeError::OwnCommitmentMismatch);
    }
    let curve = &params.curve;
    let z_p = curve.sum(all_commitments.iter().map(|c| &c.z));
    let big_h = params.h2(warrant.encoded(), &z_p, ops);
    let x = curve.add(&curve.scalar_mul(&big_h, &proxy.secret, ops), &secret.z);
    Ok(PartialSignature {
        signer: proxy.holder.clone(),
        z: secret.z,
        x,
    })
}

/// Clerk's check of one partial:
/// `e(X_Pi, P) = e(Q_Pi + Q_A, P_pub)^{hH} · e(Z_Pi + H·U, P)`.
/// Two H, one M, three P, one E.
pub fn verify_partial(
    params: &SystemParams,
    partial: &PartialSignature,
    aggregate_z: &GroupElement,
    delegation: &Delegation,
    proxy_pub: &GroupElement,
    original_pub: &GroupElement,
    ops: &mut OpCounters,
) -> Verdict {
    let curve = &params.curve;
    let fr = curve.scalar_field();
    let p = params.generator();
    let m_w = delegation.warrant.encoded();
    let h = params.h2(m_w, &delegation.u, ops);
    let big_h = params.h2(m_w, aggregate_z, ops);
    let hu = curve.scalar_mul(&big_h, &delegation.u, ops);

    let lhs = curve.pairing(&partial.x, p, ops);
    let base = curve.pairing(&curve.add(proxy_pub, original_pub), &params.p_pub, ops);
    let rhs = curve.gt_mul(
        &curve.gt_pow(&base, &fr.mul(&h, &big_h), ops),
        &curve.pairing(&curve.add(&partial.z, &hu), p, ops),
    );
    Verdict::from_bool(lhs == rhs)
}

/// Clerk: checks every partial against `Z_P = Σ Z_Pi` and sums
/// `X = Σ X_Pi`. `proxy_pubs` follows the warrant's signer order.
pub fn aggregate(
    params: &SystemParams,
    partials: &[PartialSignature],
    delegation: &Delegation,
    original_pub: &GroupElement,
    proxy_pubs: &[GroupElement],
    ops: &mut OpCounters,
) -> Result<MultiProxySignature, SchemeError> {
    let warrant = &delegation.warrant;
    expect_signer_count(warrant, proxy_pubs)?;
    check_signer_set(warrant, partials.iter().map(|p| &p.signer))?;
    let curve = &params.curve;
    let z = curve.sum(partials.iter().map(|p| &p.z));
    for (id, proxy_pub) in warrant.proxy_signers().iter().zip(proxy_pubs) {
        let partial = partials
            .iter()
            .find(|p| &p.signer == id)
            .expect("signer set checked");
        let verdict = verify_partial(
            params,
            partial,
            &z,
            delegation,
            proxy_pub,
            original_pub,
            ops,
        );
        if !verdict.is_accept() {
            return Err(SchemeError::InvalidPartial(id.clone()));
        }
    }
    let x = curve.sum(partials.iter().map(|p| &p.x));
    Ok(MultiProxySignature {
        warrant: warrant.clone(),
        z,
        x,
        u: delegation.u,
    })
}

/// Designated verification at time `now`. Policy failures (wrong verifier,
/// outside the validity window) are errors; a failed equation is
/// [`Verdict::Reject`]. Two H, one M, three P, one E.
pub fn verify_mps(
    params: &SystemParams,
    signature: &MultiProxySignature,
    verifier: &UserKeyPair,
    original_pub: &GroupElement,
    proxy_pubs: &[GroupElement],
    now: u64,
    ops: &mut OpCounters,
) -> Result<Verdict, SchemeError> {
    let warrant = &signature.warrant;
    if warrant.designated_verifier() != &verifier.identity {
        return Err(PolicyViolation::VerifierMismatch {
            designated: warrant.designated_verifier().clone(),
            presented: verifier.identity.clone(),
        }
        .into());
    }
    if now < warrant.not_before() {
        return Err(PolicyViolation::NotYetValid {
            now,
            not_before: warrant.not_before(),
        }
        .into());
    }
    if now > warrant.not_after() {
        return Err(PolicyViolation::Expired {
            now,
            not_after: warrant.not_after(),
        }
        .into());
    }
    check_mps_equation(
        params,
        signature,
        &verifier.public,
        &verifier.secret,
        original_pub,
        proxy_pubs,
        ops,
    )
}

/// The bare verification equation
/// `e(X − nH·U, Q_C) · e(Σ(Q_Pi + Q_A), S_C)^{−hH} = e(Z_P, Q_C)`,
/// without policy checks.
pub fn check_mps_equation(
    params: &SystemParams,
    signature: &MultiProxySignature,
    verifier_pub: &GroupElement,
    verifier_secret: &GroupElement,
    original_pub: &GroupElement,
    proxy_pubs: &[GroupElement],
    ops: &mut OpCounters,
) -> Result<Verdict, SchemeError> {
    let warrant = &signature.warrant;
    expect_signer_count(warrant, proxy_pubs)?;
    let curve = &params.curve;
    let fr = curve.scalar_field();
    let m_w = warrant.encoded();
    let h = params.h2(m_w, &signature.u, ops);
    let big_h = params.h2(m_w, &signature.z, ops);
    let n = fr.from_u64(warrant.signer_count() as u64);
    let nhu = curve.scalar_mul(&fr.mul(&n, &big_h), &signature.u, ops);

    let sum_q = proxy_pubs.iter().fold(GroupElement::INFINITY, |acc, q| {
        curve.add(&acc, &curve.add(q, original_pub))
    });
    let first = curve.pairing(&curve.sub(&signature.x, &nhu), verifier_pub, ops);
    let second = curve.pairing(&sum_q, verifier_secret, ops);
    let exponent = fr.neg(&fr.mul(&h, &big_h));
    let lhs = curve.gt_mul(&first, &curve.gt_pow(&second, &exponent, ops));
    let rhs = curve.pairing(&signature.z, verifier_pub, ops);
    Ok(Verdict::from_bool(lhs == rhs))
}

fn expect_signer_count(warrant: &Warrant, proxy_pubs: &[GroupElement]) -> Result<(), SchemeError> {
    if proxy_pubs.len() != warrant.signer_count() {
        return Err(SchemeError::SignerCountMismatch {
            expected: warrant.signer_count(),
            found: proxy_pubs.len(),
        });
    }
    Ok(())
}
