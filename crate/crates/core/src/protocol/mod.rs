//! Sans-IO party state machines for running the scheme between separate
//! participants.
//!
//! Message flow of a full session:
//!
//! ```text
//! every party   → PKG            ExtractRequest
//! PKG           → requester      KeyIssue
//! original      → proxies        DelegationBroadcast
//! proxy i       → other proxies  CommitmentBroadcast   (round one)
//! proxy i       → clerk          PartialSubmit         (round two)
//! clerk         → verifier       SignatureAnnounce
//! ```
//!
//! A party accepts a message only in the phase where it is expected. A
//! message one phase early is held back and replayed after the transition;
//! anything else is a phase violation. Repeats of an identical message are
//! ignored and recorded, while a different message of the same kind from
//! the same sender is equivocation and aborts the session.
//!
//! Keys travel as plain `KeyIssue` messages, so a session is a simulation
//! only; nothing here provides confidential channels.

mod message;
mod party;

use alloc::vec::Vec;

use crate::scheme::{Identity, SchemeError, SystemParams, Warrant};

pub use message::{
    frame_body_len, AbortReason, AbortReport, MessageKind, ProtocolMessage, SessionId,
    MAX_FRAME_LEN,
};
pub use party::{Outgoing, Party, Phase, Role};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("clerk {0} is not a warrant signer")]
    ClerkNotSigner(Identity),
    #[error("{0} holds more than one role")]
    RoleConflict(Identity),
    #[error("{0} has no role in this session")]
    UnknownParty(Identity),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Deliberate misbehavior injected into one proxy signer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Behavior {
    #[default]
    Honest,
    /// Submits `X_Pi + P` instead of `X_Pi`.
    GarbagePartial,
    /// Broadcasts a second, different commitment right after the first.
    Equivocate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SessionMode {
    /// PKG issues keys and the original signer delegates in-session.
    Full,
    /// Signers start with keys and the delegation; no PKG or original signer.
    Preloaded,
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub session_id: SessionId,
    pub params: SystemParams,
    pub pkg: Identity,
    pub warrant: Warrant,
    pub clerk: Identity,
    /// Time at which the verifier checks the warrant window.
    pub now: u64,
    /// Root of every party's RNG seed.
    pub seed: [u8; 32],
    pub mode: SessionMode,
    pub verifier_participates: bool,
    pub behaviors: Vec<(Identity, Behavior)>,
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let w = &self.warrant;
        if !w.names_proxy(&self.clerk) {
            return Err(ProtocolError::ClerkNotSigner(self.clerk.clone()));
        }
        let mut singles = alloc::vec![
            self.pkg.clone(),
            w.original_signer().clone(),
            w.designated_verifier().clone()
        ];
        singles.extend(w.proxy_signers().iter().cloned());
        for (i, id) in singles.iter().enumerate() {
            if singles[..i].contains(id) {
                return Err(ProtocolError::RoleConflict(id.clone()));
            }
        }
        if let Some((id, _)) = self.behaviors.iter().find(|(id, _)| !w.names_proxy(id)) {
            return Err(ProtocolError::UnknownParty(id.clone()));
        }
        Ok(())
    }

    /// Every participating identity: PKG, original signer, proxies in
    /// warrant order, verifier.
    pub fn roster(&self) -> Vec<Identity> {
        let w = &self.warrant;
        let mut out = Vec::new();
        if self.mode == SessionMode::Full {
            out.push(self.pkg.clone());
            out.push(w.original_signer().clone());
        }
        out.extend(w.proxy_signers().iter().cloned());
        if self.verifier_participates {
            out.push(w.designated_verifier().clone());
        }
        out
    }

    pub fn role_of(&self, id: &Identity) -> Option<Role> {
        let w = &self.warrant;
        if !self.roster().contains(id) {
            return None;
        }
        Some(if *id == self.pkg {
            Role::Pkg
        } else if id == w.original_signer() {
            Role::OriginalSigner
        } else if *id == self.clerk {
            Role::Clerk
        } else if w.names_proxy(id) {
            Role::ProxySigner
        } else {
            Role::DesignatedVerifier
        })
    }

    pub fn behavior_of(&self, id: &Identity) -> Behavior {
        self.behaviors
            .iter()
            .find(|(b, _)| b == id)
            .map(|(_, b)| *b)
            .unwrap_or_default()
    }
}
