use alloc::string::String;
use alloc::vec::Vec;

use crate::codec::{DecodeError, Reader, Writer};
use crate::scheme::Identity;

pub type SessionId = [u8; 16];

/// Largest frame body accepted from the wire.
pub const MAX_FRAME_LEN: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum MessageKind {
    ExtractRequest = 1,
    KeyIssue = 2,
    DelegationBroadcast = 3,
    CommitmentBroadcast = 4,
    PartialSubmit = 5,
    SignatureAnnounce = 6,
    Abort = 7,
}

impl MessageKind {
    pub const ALL: [MessageKind; 7] = [
        MessageKind::ExtractRequest,
        MessageKind::KeyIssue,
        MessageKind::DelegationBroadcast,
        MessageKind::CommitmentBroadcast,
        MessageKind::PartialSubmit,
        MessageKind::SignatureAnnounce,
        MessageKind::Abort,
    ];

    pub fn from_u8(v: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| *k as u8 == v)
    }

    pub fn name(self) -> &'static str {
        match self {
            MessageKind::ExtractRequest => "extract-request",
            MessageKind::KeyIssue => "key-issue",
            MessageKind::DelegationBroadcast => "delegation",
            MessageKind::CommitmentBroadcast => "commitment",
            MessageKind::PartialSubmit => "partial",
            MessageKind::SignatureAnnounce => "signature",
            MessageKind::Abort => "abort",
        }
    }
}

/// One framed protocol message. The payload is the codec encoding of the
/// body named by `kind`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolMessage {
    pub kind: MessageKind,
    pub session_id: SessionId,
    pub sender: Identity,
    pub payload: Vec<u8>,
}

impl ProtocolMessage {
    /// `len ‖ kind ‖ session_id ‖ len(sender) ‖ sender ‖ payload`, where the
    /// leading 4-byte length covers everything after it.
    pub fn encode(&self) -> Vec<u8> {
        let mut body = Writer::new();
        body.put_u8(self.kind as u8)
            .put_raw(&self.session_id)
            .put_identity(&self.sender)
            .put_raw(&self.payload);
        let body = body.into_bytes();
        let mut w = Writer::new();
        w.put_bytes(&body);
        w.into_bytes()
    }

    /// Decodes exactly one frame.
    pub fn decode(frame: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(frame);
        let body = r.get_bytes()?;
        r.finish()?;
        if body.len() > MAX_FRAME_LEN {
            return Err(DecodeError::InvalidValue("frame too large"));
        }
        let mut r = Reader::new(body);
        let kind_byte = r.get_u8()?;
        let kind = MessageKind::from_u8(kind_byte).ok_or(DecodeError::UnknownKind(kind_byte))?;
        let session_id = r.get_array::<16>()?;
        let sender = r.get_identity()?;
        let payload = r.get_raw(r.remaining())?.to_vec();
        Ok(Self {
            kind,
            session_id,
            sender,
            payload,
        })
    }
}

/// Body length announced by a frame header, for stream readers.
pub fn frame_body_len(header: [u8; 4]) -> Result<usize, DecodeError> {
    let len = u32::from_be_bytes(header) as usize;
    if len > MAX_FRAME_LEN {
        return Err(DecodeError::InvalidValue("frame too large"));
    }
    Ok(len)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum AbortReason {
    /// The blamed party never sent what others were waiting for.
    Timeout = 1,
    /// Two different messages of one kind from the same sender.
    Equivocation = 2,
    /// A partial signature failed the clerk's check.
    InvalidPartial = 3,
    /// A message arrived in a phase where it is not allowed.
    PhaseViolation = 4,
    /// A frame or payload failed to decode or was addressed wrongly.
    Malformed = 5,
    /// An issued key failed its pairing check.
    InvalidKey = 6,
    /// The delegation failed verification.
    InvalidDelegation = 7,
    /// A commitment or partial is inconsistent with the session.
    Inconsistent = 8,
}

impl AbortReason {
    const ALL: [AbortReason; 8] = [
        AbortReason::Timeout,
        AbortReason::Equivocation,
        AbortReason::InvalidPartial,
        AbortReason::PhaseViolation,
        AbortReason::Malformed,
        AbortReason::InvalidKey,
        AbortReason::InvalidDelegation,
        AbortReason::Inconsistent,
    ];

    pub fn from_u8(v: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| *k as u8 == v)
    }

    pub fn name(self) -> &'static str {
        match self {
            AbortReason::Timeout => "timeout",
            AbortReason::Equivocation => "equivocation",
            AbortReason::InvalidPartial => "invalid-partial",
            AbortReason::PhaseViolation => "phase-violation",
            AbortReason::Malformed => "malformed",
            AbortReason::InvalidKey => "invalid-key",
            AbortReason::InvalidDelegation => "invalid-delegation",
            AbortReason::Inconsistent => "inconsistent",
        }
    }
}

/// Why a session stopped and who is held responsible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbortReport {
    pub reporter: Identity,
    pub blamed: Identity,
    pub reason: AbortReason,
    pub detail: String,
}

impl AbortReport {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_u8(self.reason as u8)
            .put_identity(&self.reporter)
            .put_identity(&self.blamed)
            .put_bytes(self.detail.as_bytes());
        w.into_bytes()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let code = r.get_u8()?;
        let reason = AbortReason::from_u8(code).ok_or(DecodeError::InvalidValue("abort reason"))?;
        let reporter = r.get_identity()?;
        let blamed = r.get_identity()?;
        let detail = core::str::from_utf8(r.get_bytes()?)
            .map_err(|_| DecodeError::InvalidValue("abort detail"))?
            .into();
        r.finish()?;
        Ok(Self {
            reporter,
            blamed,
            reason,
            detail,
        })
    }
}

impl core::fmt::Display for AbortReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} blames {}: {}",
            self.reporter,
            self.blamed,
            self.reason.name()
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}
