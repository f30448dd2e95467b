use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::message::{AbortReason, AbortReport, MessageKind, ProtocolMessage};
use super::{Behavior, ProtocolError, SessionConfig, SessionMode};
use crate::algebra::{GroupElement, OpCounters};
use crate::codec;
use crate::scheme::{
    self, CommitSecret, Commitment, Delegation, Identity, MasterSecret, MultiProxySignature,
    PartialSignature, ProxyKey, SchemeError, UserKeyPair, Verdict,
};

const PARTY_SEED_TAG: &[u8] = b"DVMPS-PARTY-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Init,
    Keyed,
    Delegated,
    Committed,
    Partialed,
    Done,
    Aborted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Pkg,
    OriginalSigner,
    ProxySigner,
    /// A proxy signer that also collects and aggregates partials.
    Clerk,
    DesignatedVerifier,
}

impl Role {
    pub fn is_signer(self) -> bool {
        matches!(self, Role::ProxySigner | Role::Clerk)
    }
}

/// A message to hand to the transport, addressed to each listed party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outgoing {
    pub to: Vec<Identity>,
    pub message: ProtocolMessage,
}

enum Legality {
    Legal,
    Early,
    Illegal,
}

/// One participant's sans-IO state machine. Feed it frames with
/// [`Party::handle`] and forward whatever it returns.
pub struct Party {
    id: Identity,
    role: Role,
    cfg: SessionConfig,
    phase: Phase,
    behavior: Behavior,
    rng: ChaCha20Rng,
    ops: OpCounters,
    ledger: BTreeMap<(Identity, MessageKind), Vec<u8>>,
    duplicates: Vec<(Identity, MessageKind)>,
    stash: Vec<ProtocolMessage>,
    abort: Option<AbortReport>,
    public_keys: BTreeMap<Identity, GroupElement>,
    key: Option<UserKeyPair>,
    master: Option<MasterSecret>,
    requests: Vec<Identity>,
    pending_delegation: Option<Delegation>,
    proxy_key: Option<ProxyKey>,
    commit_secret: Option<CommitSecret>,
    commitments: Vec<Commitment>,
    partials: Vec<PartialSignature>,
    signature: Option<MultiProxySignature>,
    verification: Option<Result<Verdict, SchemeError>>,
}

impl Party {
    /// The key generation center of a full session.
    pub fn pkg(cfg: &SessionConfig, master: MasterSecret) -> Result<Self, ProtocolError> {
        cfg.validate()?;
        if cfg.mode != SessionMode::Full {
            return Err(ProtocolError::UnknownParty(cfg.pkg.clone()));
        }
        let mut party = Self::blank(cfg, cfg.pkg.clone(), Role::Pkg);
        party.master = Some(master);
        Ok(party)
    }

    /// Any non-PKG participant of a full session, starting without keys.
    pub fn new(cfg: &SessionConfig, id: &Identity) -> Result<Self, ProtocolError> {
        cfg.validate()?;
        let role = cfg
            .role_of(id)
            .ok_or_else(|| ProtocolError::UnknownParty(id.clone()))?;
        if role == Role::Pkg || cfg.mode != SessionMode::Full {
            return Err(ProtocolError::UnknownParty(id.clone()));
        }
        Ok(Self::blank(cfg, id.clone(), role))
    }

    /// A proxy signer that already holds its key and the delegation.
    pub fn preloaded_signer(
        cfg: &SessionConfig,
        key: UserKeyPair,
        delegation: Delegation,
    ) -> Result<Self, ProtocolError> {
        cfg.validate()?;
        let role = cfg.role_of(&key.identity).filter(|r| r.is_signer());
        let role = role.ok_or_else(|| ProtocolError::UnknownParty(key.identity.clone()))?;
        let mut party = Self::blank(cfg, key.identity.clone(), role);
        party.key = Some(key);
        party.pending_delegation = Some(delegation);
        party.phase = Phase::Keyed;
        Ok(party)
    }

    /// The designated verifier, already holding its key.
    pub fn preloaded_verifier(
        cfg: &SessionConfig,
        key: UserKeyPair,
    ) -> Result<Self, ProtocolError> {
        cfg.validate()?;
        if cfg.role_of(&key.identity) != Some(Role::DesignatedVerifier) {
            return Err(ProtocolError::UnknownParty(key.identity.clone()));
        }
        let mut party = Self::blank(cfg, key.identity.clone(), Role::DesignatedVerifier);
        party.key = Some(key);
        party.phase = Phase::Keyed;
        Ok(party)
    }

    fn blank(cfg: &SessionConfig, id: Identity, role: Role) -> Self {
        let seed: [u8; 32] = Sha256::new()
            .chain_update((PARTY_SEED_TAG.len() as u32).to_be_bytes())
            .chain_update(PARTY_SEED_TAG)
            .chain_update(cfg.seed)
            .chain_update(id.as_bytes())
            .finalize()
            .into();
        Self {
            behavior: cfg.behavior_of(&id),
            id,
            role,
            cfg: cfg.clone(),
            phase: Phase::Init,
            rng: ChaCha20Rng::from_seed(seed),
            ops: OpCounters::new(),
            ledger: BTreeMap::new(),
            duplicates: Vec::new(),
            stash: Vec::new(),
            abort: None,
            public_keys: BTreeMap::new(),
            key: None,
            master: None,
            requests: Vec::new(),
            pending_delegation: None,
            proxy_key: None,
            commit_secret: None,
            commitments: Vec::new(),
            partials: Vec::new(),
            signature: None,
            verification: None,
        }
    }

    pub fn identity(&self) -> &Identity {
        &self.id
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn ops(&self) -> OpCounters {
        self.ops
    }

    /// Identical re-deliveries that were ignored, in arrival order.
    pub fn duplicates(&self) -> &[(Identity, MessageKind)] {
        &self.duplicates
    }

    pub fn abort_report(&self) -> Option<&AbortReport> {
        self.abort.as_ref()
    }

    /// The aggregated signature, on the clerk once it finishes.
    pub fn signature(&self) -> Option<&MultiProxySignature> {
        self.signature.as_ref()
    }

    /// The designated verifier's decision, once made.
    pub fn verification(&self) -> Option<&Result<Verdict, SchemeError>> {
        self.verification.as_ref()
    }

    /// Parties this one is still waiting to hear from.
    pub fn awaiting(&self) -> Vec<Identity> {
        let w = &self.cfg.warrant;
        let missing = |have: &[Identity]| -> Vec<Identity> {
            w.proxy_signers()
                .iter()
                .filter(|id| !have.contains(id))
                .cloned()
                .collect()
        };
        match (self.role, self.phase) {
            (_, Phase::Done | Phase::Aborted) => Vec::new(),
            (Role::Pkg, _) => self
                .cfg
                .roster()
                .into_iter()
                .filter(|id| *id != self.id && !self.requests.contains(id))
                .collect(),
            (_, Phase::Init) => vec![self.cfg.pkg.clone()],
            (Role::ProxySigner | Role::Clerk, Phase::Keyed) => vec![w.original_signer().clone()],
            (Role::ProxySigner | Role::Clerk, Phase::Delegated) => missing(
                &self
                    .commitments
                    .iter()
                    .map(|c| c.signer.clone())
                    .collect::<Vec<_>>(),
            ),
            (Role::Clerk, Phase::Committed) => missing(
                &self
                    .partials
                    .iter()
                    .map(|p| p.signer.clone())
                    .collect::<Vec<_>>(),
            ),
            (Role::DesignatedVerifier, Phase::Keyed) => vec![self.cfg.clerk.clone()],
            _ => Vec::new(),
        }
    }

    /// Opening messages.
    pub fn start(&mut self) -> Vec<Outgoing> {
        match (self.role, self.phase) {
            (Role::Pkg, _) => Vec::new(),
            (_, Phase::Init) => {
                let msg = self.message(MessageKind::ExtractRequest, Vec::new());
                vec![Outgoing {
                    to: vec![self.cfg.pkg.clone()],
                    message: msg,
                }]
            }
            (Role::ProxySigner | Role::Clerk, Phase::Keyed) => match self.pending_delegation.take()
            {
                Some(d) => {
                    let mut out = self.accept_delegation(d);
                    out.extend(self.drain_stash());
                    out
                }
                None => Vec::new(),
            },
            _ => Vec::new(),
        }
    }

    /// Processes one frame delivered from `from`.
    pub fn handle(&mut self, from: &Identity, frame: &[u8]) -> Vec<Outgoing> {
        if self.phase == Phase::Aborted || self.abort.is_some() {
            return Vec::new();
        }
        let msg = match ProtocolMessage::decode(frame) {
            Ok(m) => m,
            Err(e) => return self.fail(from, AbortReason::Malformed, format!("{e}")),
        };
        if &msg.sender != from || msg.session_id != self.cfg.session_id {
            return self.fail(
                from,
                AbortReason::Malformed,
                "sender or session mismatch".into(),
            );
        }
        if msg.kind == MessageKind::Abort {
            if let Ok(report) = AbortReport::decode(&msg.payload) {
                self.abort = Some(report);
                self.phase = Phase::Aborted;
            }
            return Vec::new();
        }
        let slot = (msg.sender.clone(), msg.kind);
        match self.ledger.get(&slot) {
            Some(prev) if *prev == msg.payload => {
                self.duplicates.push(slot);
                return Vec::new();
            }
            Some(_) => {
                let detail = format!("conflicting {}", msg.kind.name());
                return self.fail(from, AbortReason::Equivocation, detail);
            }
            None => {
                self.ledger.insert(slot, msg.payload.clone());
            }
        }
        match self.legality(&msg) {
            Legality::Illegal => self.violation(&msg),
            Legality::Early => {
                self.stash.push(msg);
                Vec::new()
            }
            Legality::Legal => {
                let mut out = self.process(msg);
                out.extend(self.drain_stash());
                out
            }
        }
    }

    fn drain_stash(&mut self) -> Vec<Outgoing> {
        let mut out = Vec::new();
        loop {
            if self.abort.is_some() {
                return out;
            }
            let ready = self
                .stash
                .iter()
                .position(|m| matches!(self.legality(m), Legality::Legal));
            let Some(idx) = ready else { return out };
            let msg = self.stash.remove(idx);
            out.extend(self.process(msg));
        }
    }

    fn expected_sender(&self, msg: &ProtocolMessage) -> bool {
        let w = &self.cfg.warrant;
        let s = &msg.sender;
        match msg.kind {
            MessageKind::ExtractRequest => self.cfg.roster().contains(s) && *s != self.cfg.pkg,
            MessageKind::KeyIssue => *s == self.cfg.pkg,
            MessageKind::DelegationBroadcast => s == w.original_signer(),
            MessageKind::CommitmentBroadcast | MessageKind::PartialSubmit => {
                w.names_proxy(s) && *s != self.id
            }
            MessageKind::SignatureAnnounce => *s == self.cfg.clerk,
            MessageKind::Abort => true,
        }
    }

    fn legality(&self, msg: &ProtocolMessage) -> Legality {
        use MessageKind as K;
        use Phase as P;
        let signer = self.role.is_signer();
        let (legal_in, early_in) = match (self.role, msg.kind) {
            (Role::Pkg, K::ExtractRequest) => (P::Init, None),
            (Role::Pkg, _) => return Legality::Illegal,
            (_, K::KeyIssue) => (P::Init, None),
            (_, K::DelegationBroadcast) if signer => (P::Keyed, Some(P::Init)),
            (_, K::CommitmentBroadcast) if signer => (P::Delegated, Some(P::Keyed)),
            (Role::Clerk, K::PartialSubmit) => (P::Committed, Some(P::Delegated)),
            (Role::DesignatedVerifier, K::SignatureAnnounce) => (P::Keyed, Some(P::Init)),
            _ => return Legality::Illegal,
        };
        if self.phase == legal_in {
            Legality::Legal
        } else if Some(self.phase) == early_in {
            Legality::Early
        } else {
            Legality::Illegal
        }
    }

    fn violation(&mut self, msg: &ProtocolMessage) -> Vec<Outgoing> {
        let (reason, detail) = if self.expected_sender(msg) {
            (
                AbortReason::PhaseViolation,
                format!("{} in phase {:?}", msg.kind.name(), self.phase),
            )
        } else {
            (
                AbortReason::Malformed,
                format!("unexpected {} sender", msg.kind.name()),
            )
        };
        let phase = self.phase;
        let out = self.fail(&msg.sender.clone(), reason, detail);
        // a rejected message leaves the state machine where it was
        self.phase = phase;
        out
    }

    fn process(&mut self, msg: ProtocolMessage) -> Vec<Outgoing> {
        if !self.expected_sender(&msg) {
            return self.violation(&msg);
        }
        let from = msg.sender.clone();
        let curve = self.cfg.params.curve().clone();
        match msg.kind {
            MessageKind::ExtractRequest => self.issue_key(from),
            MessageKind::KeyIssue => match codec::decode_user_key(&curve, &msg.payload) {
                Ok(key) => self.accept_key(key),
                Err(e) => self.fail(&from, AbortReason::Malformed, format!("{e}")),
            },
            MessageKind::DelegationBroadcast => {
                match codec::decode_delegation(&curve, &msg.payload) {
                    Ok(d) => self.accept_delegation(d),
                    Err(e) => self.fail(&from, AbortReason::Malformed, format!("{e}")),
                }
            }
            MessageKind::CommitmentBroadcast => {
                match codec::decode_commitment(&curve, &msg.payload) {
                    Ok(c) if c.signer == from => {
                        self.commitments.push(c);
                        self.after_commitment()
                    }
                    Ok(_) => {
                        self.fail(&from, AbortReason::Inconsistent, "commitment signer".into())
                    }
                    Err(e) => self.fail(&from, AbortReason::Malformed, format!("{e}")),
                }
            }
            MessageKind::PartialSubmit => match codec::decode_partial(&curve, &msg.payload) {
                Ok(p) if p.signer == from => self.accept_partial(p),
                Ok(_) => self.fail(&from, AbortReason::Inconsistent, "partial signer".into()),
                Err(e) => self.fail(&from, AbortReason::Malformed, format!("{e}")),
            },
            MessageKind::SignatureAnnounce => match codec::decode_signature(&curve, &msg.payload) {
                Ok(sig) => self.accept_signature(sig),
                Err(e) => self.fail(&from, AbortReason::Malformed, format!("{e}")),
            },
            MessageKind::Abort => Vec::new(),
        }
    }

    fn issue_key(&mut self, requester: Identity) -> Vec<Outgoing> {
        let master = self.master.as_ref().expect("pkg holds the master secret");
        let key = match scheme::extract_key(&self.cfg.params, master, &requester, &mut self.ops) {
            Ok(k) => k,
            Err(e) => return self.fail(&self.id.clone(), AbortReason::InvalidKey, format!("{e}")),
        };
        self.requests.push(requester.clone());
        let payload = codec::encode_user_key(self.cfg.params.curve(), &key);
        let msg = self.message(MessageKind::KeyIssue, payload);
        if self.awaiting().is_empty() {
            self.phase = Phase::Done;
        }
        vec![Outgoing {
            to: vec![requester],
            message: msg,
        }]
    }

    fn accept_key(&mut self, key: UserKeyPair) -> Vec<Outgoing> {
        let pkg = self.cfg.pkg.clone();
        if key.identity != self.id
            || !self
                .cfg
                .params
                .check_user_key(&key, &mut self.ops)
                .is_accept()
        {
            return self.fail(&pkg, AbortReason::InvalidKey, String::new());
        }
        self.key = Some(key);
        self.phase = Phase::Keyed;
        if self.role == Role::OriginalSigner {
            return self.delegate();
        }
        Vec::new()
    }

    fn delegate(&mut self) -> Vec<Outgoing> {
        let verifier = self.cfg.warrant.designated_verifier().clone();
        let Some(q_c) = self.public_key(&verifier) else {
            return self.fail(
                &verifier,
                AbortReason::InvalidKey,
                "unhashable identity".into(),
            );
        };
        let key = self.key.as_ref().expect("keyed");
        let warrant = self.cfg.warrant.clone();
        match scheme::delegate(
            &self.cfg.params,
            key,
            &q_c,
            warrant,
            &mut self.rng,
            &mut self.ops,
        ) {
            Ok(d) => {
                let payload = codec::encode_delegation(self.cfg.params.curve(), &d);
                let msg = self.message(MessageKind::DelegationBroadcast, payload);
                self.phase = Phase::Done;
                vec![Outgoing {
                    to: self.cfg.warrant.proxy_signers().to_vec(),
                    message: msg,
                }]
            }
            Err(e) => self.fail(
                &self.id.clone(),
                AbortReason::InvalidDelegation,
                format!("{e}"),
            ),
        }
    }

    fn accept_delegation(&mut self, d: Delegation) -> Vec<Outgoing> {
        let original = self.cfg.warrant.original_signer().clone();
        if d.warrant != self.cfg.warrant {
            return self.fail(
                &original,
                AbortReason::Inconsistent,
                "delegated warrant differs".into(),
            );
        }
        let (Some(q_a), Some(q_c)) = (
            self.public_key(&original),
            self.public_key(&self.cfg.warrant.designated_verifier().clone()),
        ) else {
            return self.fail(
                &original,
                AbortReason::InvalidKey,
                "unhashable identity".into(),
            );
        };
        let key = self.key.as_ref().expect("keyed");
        let proxy_key =
            match scheme::derive_proxy_key(&self.cfg.params, &d, key, &q_a, &mut self.ops) {
                Ok(k) => k,
                Err(e) => {
                    return self.fail(&original, AbortReason::InvalidDelegation, format!("{e}"))
                }
            };
        let (commitment, secret) = scheme::commit(
            &self.cfg.params,
            &proxy_key,
            &q_c,
            &mut self.rng,
            &mut self.ops,
        );
        self.proxy_key = Some(proxy_key);
        self.commit_secret = Some(secret);
        self.phase = Phase::Delegated;

        let peers: Vec<Identity> = self
            .cfg
            .warrant
            .proxy_signers()
            .iter()
            .filter(|id| **id != self.id)
            .cloned()
            .collect();
        let curve = self.cfg.params.curve().clone();
        let mut out = vec![Outgoing {
            to: peers.clone(),
            message: self.message(
                MessageKind::CommitmentBroadcast,
                codec::encode_commitment(&curve, &commitment),
            ),
        }];
        if self.behavior == Behavior::Equivocate {
            let twin = Commitment {
                signer: self.id.clone(),
                z: curve.add(&commitment.z, curve.generator()),
            };
            out.push(Outgoing {
                to: peers,
                message: self.message(
                    MessageKind::CommitmentBroadcast,
                    codec::encode_commitment(&curve, &twin),
                ),
            });
        }
        self.commitments.push(commitment);
        out.extend(self.after_commitment());
        out
    }

    fn after_commitment(&mut self) -> Vec<Outgoing> {
        if self.commitments.len() < self.cfg.warrant.signer_count() {
            return Vec::new();
        }
        let (key, secret) = (
            self.proxy_key.as_ref().expect("delegated"),
            self.commit_secret.as_ref().expect("committed"),
        );
        let mut partial = match scheme::partial_sign(
            &self.cfg.params,
            key,
            secret,
            &self.commitments,
            &mut self.ops,
        ) {
            Ok(p) => p,
            Err(e) => {
                return self.fail(&self.id.clone(), AbortReason::Inconsistent, format!("{e}"))
            }
        };
        if self.behavior == Behavior::GarbagePartial {
            let curve = self.cfg.params.curve();
            partial.x = curve.add(&partial.x, curve.generator());
        }
        self.phase = Phase::Committed;
        if self.role == Role::Clerk {
            return self.accept_partial(partial);
        }
        let payload = codec::encode_partial(self.cfg.params.curve(), &partial);
        let msg = self.message(MessageKind::PartialSubmit, payload);
        self.phase = Phase::Done;
        vec![Outgoing {
            to: vec![self.cfg.clerk.clone()],
            message: msg,
        }]
    }

    fn accept_partial(&mut self, partial: PartialSignature) -> Vec<Outgoing> {
        let signer = partial.signer.clone();
        let committed = self
            .commitments
            .iter()
            .find(|c| c.signer == signer)
            .map(|c| c.z);
        if committed != Some(partial.z) {
            return self.fail(
                &signer,
                AbortReason::Inconsistent,
                "partial does not match commitment".into(),
            );
        }
        let original = self.cfg.warrant.original_signer().clone();
        let (Some(q_p), Some(q_a)) = (self.public_key(&signer), self.public_key(&original)) else {
            return self.fail(
                &signer,
                AbortReason::InvalidKey,
                "unhashable identity".into(),
            );
        };
        let curve = self.cfg.params.curve().clone();
        let z_p = curve.sum(self.commitments.iter().map(|c| &c.z));
        let delegation = &self.proxy_key.as_ref().expect("delegated").delegation;
        let verdict = scheme::verify_partial(
            &self.cfg.params,
            &partial,
            &z_p,
            delegation,
            &q_p,
            &q_a,
            &mut self.ops,
        );
        if !verdict.is_accept() {
            return self.fail(&signer, AbortReason::InvalidPartial, String::new());
        }
        self.partials.push(partial);
        if self.partials.len() < self.cfg.warrant.signer_count() {
            return Vec::new();
        }
        self.phase = Phase::Partialed;
        let delegation = delegation.clone();
        let x = curve.sum(self.partials.iter().map(|p| &p.x));
        let sig = MultiProxySignature {
            warrant: delegation.warrant,
            z: z_p,
            x,
            u: delegation.u,
        };
        let payload = codec::encode_signature(&curve, &sig);
        self.signature = Some(sig);
        self.phase = Phase::Done;
        if !self.cfg.verifier_participates {
            return Vec::new();
        }
        let msg = self.message(MessageKind::SignatureAnnounce, payload);
        vec![Outgoing {
            to: vec![self.cfg.warrant.designated_verifier().clone()],
            message: msg,
        }]
    }

    fn accept_signature(&mut self, sig: MultiProxySignature) -> Vec<Outgoing> {
        if sig.warrant != self.cfg.warrant {
            let clerk = self.cfg.clerk.clone();
            return self.fail(
                &clerk,
                AbortReason::Inconsistent,
                "signature warrant differs".into(),
            );
        }
        let original = self.cfg.warrant.original_signer().clone();
        let signers = self.cfg.warrant.proxy_signers().to_vec();
        let q_a = self.public_key(&original);
        let pubs: Option<Vec<GroupElement>> =
            signers.iter().map(|id| self.public_key(id)).collect();
        let (Some(q_a), Some(pubs)) = (q_a, pubs) else {
            return self.fail(
                &original,
                AbortReason::InvalidKey,
                "unhashable identity".into(),
            );
        };
        let key = self.key.as_ref().expect("keyed");
        let result = scheme::verify_mps(
            &self.cfg.params,
            &sig,
            key,
            &q_a,
            &pubs,
            self.cfg.now,
            &mut self.ops,
        );
        self.verification = Some(result);
        self.signature = Some(sig);
        self.phase = Phase::Done;
        Vec::new()
    }

    fn public_key(&mut self, id: &Identity) -> Option<GroupElement> {
        if let Some(k) = self.public_keys.get(id) {
            return Some(*k);
        }
        let k = self.cfg.params.public_key(id, &mut self.ops).ok()?;
        self.public_keys.insert(id.clone(), k);
        Some(k)
    }

    fn message(&self, kind: MessageKind, payload: Vec<u8>) -> ProtocolMessage {
        ProtocolMessage {
            kind,
            session_id: self.cfg.session_id,
            sender: self.id.clone(),
            payload,
        }
    }

    /// Records an abort blaming `blamed` and tells everyone else.
    fn fail(&mut self, blamed: &Identity, reason: AbortReason, detail: String) -> Vec<Outgoing> {
        let report = AbortReport {
            reporter: self.id.clone(),
            blamed: blamed.clone(),
            reason,
            detail,
        };
        let msg = self.message(MessageKind::Abort, report.encode());
        self.abort = Some(report);
        self.phase = Phase::Aborted;
        let to = self
            .cfg
            .roster()
            .into_iter()
            .filter(|id| *id != self.id)
            .collect();
        vec![Outgoing { to, message: msg }]
    }
}
