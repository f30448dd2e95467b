//! The identity-based strong designated verifier parallel multi-proxy
//! signature scheme.
//!
//! Roles: a PKG holding the master secret `s`, an original signer A, proxy
//! signers `P_1..P_n` (one of which acts as clerk) and a designated
//! verifier C.
//!
//! ```text
//! setup        P_pub = s·P
//! extract      Q_ID = H1(ID),  S_ID = s·Q_ID
//! delegate     U = r·Q_C,  h = H2(m_w ‖ U),  V = h·S_A + U
//!              accepted iff e(V, P) = e(Q_A, P_pub)^h · e(U, P)
//! proxy key    S_Pi = h·S_IDPi + V
//! commit       Z_Pi = t_i·Q_C,  Z_P = Σ Z_Pi
//! partial      H = H2(m_w ‖ Z_P),  X_Pi = H·S_Pi + Z_Pi
//!              accepted iff e(X_Pi, P) = e(Q_Pi + Q_A, P_pub)^{hH} · e(Z_Pi + H·U, P)
//! aggregate    X = Σ X_Pi,  σ' = (m_w, Z_P, X, U)
//! verify       e(X − nH·U, Q_C) · e(Σ(Q_Pi + Q_A), S_C)^{−hH} = e(Z_P, Q_C)
//! ```
//!
//! All randomness comes from a caller-supplied RNG and every counted
//! primitive goes through an explicit [`OpCounters`] session.

mod analysis;
mod ops;
mod warrant;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{AlgebraError, CurveParams, GroupElement, OpCounters, Scalar};

pub use analysis::{correctness_trace, forge_without_proxy_secrets, TraceInputs};
pub use ops::{
    aggregate, check_mps_equation, commit, delegate, derive_proxy_key, extract_key, partial_sign,
    setup, setup_with_curve, verify_delegation, verify_mps, verify_partial,
};
pub use warrant::{Warrant, WarrantTerms, MAX_PROXY_SIGNERS};

/// Domain tag for `H1: {0,1}* → G1`.
pub const H1_TAG: &[u8] = b"DVMPS-H1-v1";
/// Domain tag for `H2: {0,1}* × G1 → Z_q^*`.
pub const H2_TAG: &[u8] = b"DVMPS-H2-v1";
/// Domain tag for deriving the master secret from a seed.
pub const SETUP_TAG: &[u8] = b"DVMPS-SETUP-v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("seed must not be empty")]
    EmptySeed,
    #[error("master secret must be nonzero")]
    ZeroMasterSecret,
    #[error("identity must be a non-empty label")]
    InvalidIdentity,
    #[error("invalid warrant: {0}")]
    InvalidWarrant(&'static str),
    #[error("key belongs to {found}, expected {expected}")]
    IdentityMismatch { expected: Identity, found: Identity },
    #[error("delegation failed verification")]
    DelegationRejected,
    #[error("no contribution from warrant signer {0}")]
    MissingSigner(Identity),
    #[error("{0} is not a warrant signer")]
    UnexpectedSigner(Identity),
    #[error("more than one contribution from {0}")]
    DuplicateSigner(Identity),
    #[error("own commitment does not match the retained secret")]
    OwnCommitmentMismatch,
    #[error("partial signature from {0} failed verification")]
    InvalidPartial(Identity),
    #[error("expected {expected} signer public keys, got {found}")]
    SignerCountMismatch { expected: usize, found: usize },
    #[error("policy violation: {0}")]
    Policy(#[from] PolicyViolation),
}

impl SchemeError {
    pub fn is_policy(&self) -> bool {
        matches!(self, SchemeError::Policy(_))
    }
}

/// Precondition failures that are not cryptographic rejections.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolicyViolation {
    #[error("signature is designated to {designated}, not {presented}")]
    VerifierMismatch {
        designated: Identity,
        presented: Identity,
    },
    #[error("warrant not valid before {not_before} (now {now})")]
    NotYetValid { now: u64, not_before: u64 },
    #[error("warrant expired at {not_after} (now {now})")]
    Expired { now: u64, not_after: u64 },
    #[error("{0} is not named in the warrant")]
    NotInWarrant(Identity),
}

/// Outcome of a cryptographic check. Policy failures are reported as
/// [`SchemeError::Policy`] instead, so the two never mix.
#[must_use]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }

    pub(crate) fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

/// A user label such as `"alice"`. Non-empty UTF-8.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity(String);

impl Identity {
    pub fn new(label: impl Into<String>) -> Result<Self, SchemeError> {
        let label = label.into();
        if label.is_empty() || label.len() > u32::MAX as usize {
            return Err(SchemeError::InvalidIdentity);
        }
        Ok(Self(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Public system parameters `(G1, G2, P, P_pub, H1, H2, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemParams {
    curve: CurveParams,
    p_pub: GroupElement,
}

impl SystemParams {
    /// Rebuilds parameters from published values.
    pub fn from_public(curve: CurveParams, p_pub: GroupElement) -> Result<Self, SchemeError> {
        if p_pub.is_infinity() || !curve.is_in_subgroup(&p_pub) {
            return Err(AlgebraError::NotInSubgroup.into());
        }
        Ok(Self { curve, p_pub })
    }

    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn generator(&self) -> &GroupElement {
        self.curve.generator()
    }

    pub fn p_pub(&self) -> &GroupElement {
        &self.p_pub
    }

    pub fn h1_tag(&self) -> &'static [u8] {
        H1_TAG
    }

    pub fn h2_tag(&self) -> &'static [u8] {
        H2_TAG
    }

    /// `Q_ID = H1(ID)`; one H.
    pub fn public_key(
        &self,
        id: &Identity,
        ops: &mut OpCounters,
    ) -> Result<GroupElement, SchemeError> {
        Ok(self.curve.hash_to_group(id.as_bytes(), H1_TAG, ops)?)
    }

    /// `H2(bytes ‖ point)`; one H.
    pub(crate) fn h2(&self, bytes: &[u8], point: &GroupElement, ops: &mut OpCounters) -> Scalar {
        self.curve.hash_to_scalar(bytes, point, H2_TAG, ops)
    }

    /// Checks `e(S_ID, P) = e(Q_ID, P_pub)`, the public consistency of an
    /// extracted key. Two P.
    pub fn check_user_key(&self, key: &UserKeyPair, ops: &mut OpCounters) -> Verdict {
        let lhs = self.curve.pairing(&key.secret, self.generator(), ops);
        let rhs = self.curve.pairing(&key.public, &self.p_pub, ops);
        Verdict::from_bool(lhs == rhs && !key.public.is_infinity())
    }
}

/// The PKG's `s`, nonzero, with `P_pub = s·P`.
#[derive(Clone, PartialEq, Eq)]
pub struct MasterSecret(pub(crate) Scalar);

impl MasterSecret {
    pub fn scalar(&self) -> &Scalar {
        &self.0
    }

    pub fn from_scalar(s: Scalar) -> Result<Self, SchemeError> {
        if s.is_zero() {
            return Err(SchemeError::ZeroMasterSecret);
        }
        Ok(Self(s))
    }
}

impl fmt::Debug for MasterSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MasterSecret(..)")
    }
}

/// `(ID, Q_ID, S_ID)`.
#[derive(Clone, PartialEq, Eq)]
pub struct UserKeyPair {
    pub identity: Identity,
    pub public: GroupElement,
    pub secret: GroupElement,
}

impl fmt::Debug for UserKeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UserKeyPair")
            .field("identity", &self.identity)
            .field("public", &self.public)
            .finish_non_exhaustive()
    }
}

/// `σ = (m_w, U, V)` sent by the original signer to every proxy signer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delegation {
    pub warrant: Warrant,
    pub u: GroupElement,
    pub v: GroupElement,
}

/// `S_Pi = h·S_IDPi + V`, derived only from a delegation that verified.
#[derive(Clone, PartialEq, Eq)]
pub struct ProxyKey {
    pub holder: Identity,
    pub secret: GroupElement,
    pub delegation: Delegation,
    /// `h = H2(m_w ‖ U)`, kept from the verification that admitted the key.
    pub(crate) h: Scalar,
}

impl ProxyKey {
    pub fn warrant(&self) -> &Warrant {
        &self.delegation.warrant
    }

    pub fn delegation_hash(&self) -> &Scalar {
        &self.h
    }
}

impl fmt::Debug for ProxyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProxyKey")
            .field("holder", &self.holder)
            .finish_non_exhaustive()
    }
}

/// First-round broadcast `Z_Pi = t_i·Q_C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commitment {
    pub signer: Identity,
    pub z: GroupElement,
}

/// The nonce `t_i` a signer keeps for round two, with the `Z_Pi` it produced.
#[derive(Clone, PartialEq, Eq)]
pub struct CommitSecret {
    pub(crate) t: Scalar,
    pub(crate) z: GroupElement,
}

impl CommitSecret {
    pub fn nonce(&self) -> &Scalar {
        &self.t
    }
}

impl fmt::Debug for CommitSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CommitSecret(..)")
    }
}

/// `(Z_Pi, X_Pi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSignature {
    pub signer: Identity,
    pub z: GroupElement,
    pub x: GroupElement,
}

/// `σ' = (m_w, Z_P, X, U)`. The signer set is the warrant's proxy list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiProxySignature {
    pub warrant: Warrant,
    pub z: GroupElement,
    pub x: GroupElement,
    pub u: GroupElement,
}

/// Checks that `signers` names every warrant proxy exactly once.
pub(crate) fn check_signer_set<'a, I>(warrant: &Warrant, signers: I) -> Result<(), SchemeError>
where
    I: IntoIterator<Item = &'a Identity>,
{
    let expected = warrant.proxy_signers();
    let mut seen: Vec<&Identity> = Vec::with_capacity(expected.len());
    for id in signers {
        if !expected.contains(id) {
            return Err(SchemeError::UnexpectedSigner(id.clone()));
        }
        if seen.contains(&id) {
            return Err(SchemeError::DuplicateSigner(id.clone()));
        }
        seen.push(id);
    }
    if let Some(missing) = expected.iter().find(|id| !seen.contains(id)) {
        return Err(SchemeError::MissingSigner(missing.clone()));
    }
    Ok(())
}
