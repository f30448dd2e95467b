//! Drives a set of party state machines over a [`Transport`].

use std::collections::BTreeMap;

use dvmps_core::codec::{parse_fixture, render_fixture, DecodeError, Fixture, Reader, Writer};
use dvmps_core::protocol::{
    AbortReason, AbortReport, MessageKind, Outgoing, Party, Phase, ProtocolError, ProtocolMessage,
    SessionConfig, SessionMode,
};
use dvmps_core::scheme::{Identity, MasterSecret, MultiProxySignature, SchemeError, Verdict};

use crate::net::{Delivery, Transport, TransportError};

/// Identity used as reporter when the driver itself declares a timeout.
pub const DRIVER_IDENTITY: &str = "session-driver";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SessionLimits {
    /// Deliveries processed before giving up.
    pub max_steps: usize,
    /// Ticks `receive` may wait before the network counts as quiet.
    pub idle_timeout: u64,
}

impl Default for SessionLimits {
    fn default() -> Self {
        Self {
            max_steps: 100_000,
            idle_timeout: 64,
        }
    }
}

/// Every delivery of a run, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub deliveries: Vec<Delivery>,
}

impl Transcript {
    /// Text fixture with one `dNNNNN` entry per delivery, each holding
    /// `len(from) ‖ from ‖ len(to) ‖ to ‖ frame`.
    pub fn to_fixture(&self) -> Fixture {
        let mut fx = Fixture::new();
        for (i, d) in self.deliveries.iter().enumerate() {
            let mut w = Writer::new();
            w.put_identity(&d.from)
                .put_identity(&d.to)
                .put_raw(&d.frame);
            fx.insert(format!("d{i:05}"), w.into_bytes());
        }
        fx
    }

    pub fn from_fixture(fx: &Fixture) -> Result<Self, DecodeError> {
        let mut deliveries = Vec::new();
        for name in fx.names().filter(|n| n.starts_with('d')) {
            let mut r = Reader::new(fx.get(name)?);
            let from = r.get_identity()?;
            let to = r.get_identity()?;
            let frame = r.get_raw(r.remaining())?.to_vec();
            deliveries.push(Delivery { from, to, frame });
        }
        Ok(Self { deliveries })
    }

    pub fn render(&self) -> String {
        render_fixture(&self.to_fixture())
    }

    pub fn parse(text: &str) -> Result<Self, DecodeError> {
        Self::from_fixture(&parse_fixture(text)?)
    }
}

#[derive(Debug)]
pub struct SessionOutcome {
    pub signature: MultiProxySignature,
    /// The designated verifier's decision, if it took part.
    pub verification: Option<Result<Verdict, SchemeError>>,
    pub transcript: Transcript,
    /// Identical re-deliveries ignored across all parties.
    pub duplicates_ignored: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("session aborted: {report}")]
    Aborted {
        report: AbortReport,
        transcript: Transcript,
    },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("session finished without a signature")]
    NoSignature,
}

impl SessionError {
    pub fn abort_report(&self) -> Option<&AbortReport> {
        match self {
            SessionError::Aborted { report, .. } => Some(report),
            _ => None,
        }
    }
}

/// Builds every party of a full session from `cfg` and runs it.
pub fn run_session(
    cfg: &SessionConfig,
    master: &MasterSecret,
    transport: &mut dyn Transport,
    limits: SessionLimits,
) -> Result<SessionOutcome, SessionError> {
    run_parties(full_parties(cfg, master)?, transport, limits)
}

/// Fresh parties for a full session, in roster order.
pub fn full_parties(
    cfg: &SessionConfig,
    master: &MasterSecret,
) -> Result<Vec<Party>, ProtocolError> {
    assert_eq!(cfg.mode, SessionMode::Full, "full sessions only");
    cfg.roster()
        .iter()
        .map(|id| {
            if *id == cfg.pkg {
                Party::pkg(cfg, master.clone())
            } else {
                Party::new(cfg, id)
            }
        })
        .collect()
}

/// Runs `parties` until every one is done, an abort reaches another party,
/// or the network goes quiet with work outstanding (a timeout blamed on the
/// most-awaited party). An abort whose frames are all lost does not end the
/// session by itself.
pub fn run_parties(
    mut parties: Vec<Party>,
    transport: &mut dyn Transport,
    limits: SessionLimits,
) -> Result<SessionOutcome, SessionError> {
    let index: BTreeMap<Identity, usize> = parties
        .iter()
        .enumerate()
        .map(|(i, p)| (p.identity().clone(), i))
        .collect();
    let mut transcript = Transcript::default();
    let mut unheard: Vec<AbortReport> = Vec::new();

    for party in parties.iter_mut() {
        let out = party.start();
        if let Some(report) = step_abort(party, &out, &mut unheard) {
            return Err(SessionError::Aborted { report, transcript });
        }
        dispatch(transport, party.identity(), out)?;
    }

    for _ in 0..limits.max_steps {
        let Some(delivery) = transport.receive(limits.idle_timeout)? else {
            return finish(parties, transcript, unheard);
        };
        let heard = abort_payload(&delivery.frame);
        let Some(&i) = index.get(&delivery.to) else {
            transcript.deliveries.push(delivery);
            continue;
        };
        let out = parties[i].handle(&delivery.from, &delivery.frame);
        transcript.deliveries.push(delivery);
        if let Some(report) = heard {
            return Err(SessionError::Aborted { report, transcript });
        }
        if let Some(report) = step_abort(&parties[i], &out, &mut unheard) {
            return Err(SessionError::Aborted { report, transcript });
        }
        dispatch(transport, parties[i].identity(), out)?;
    }
    let report = timeout_report(&parties);
    Err(SessionError::Aborted { report, transcript })
}

/// Records a fresh abort by `p`. Returns it when there is nobody to tell.
fn step_abort(p: &Party, out: &[Outgoing], unheard: &mut Vec<AbortReport>) -> Option<AbortReport> {
    let report = own_abort(p)?;
    if unheard.contains(&report) {
        return None;
    }
    let sent = out
        .iter()
        .any(|o| o.message.kind == MessageKind::Abort && !o.to.is_empty());
    if !sent {
        return Some(report);
    }
    unheard.push(report);
    None
}

fn abort_payload(frame: &[u8]) -> Option<AbortReport> {
    let msg = ProtocolMessage::decode(frame).ok()?;
    (msg.kind == MessageKind::Abort)
        .then(|| AbortReport::decode(&msg.payload).ok())
        .flatten()
}

/// Feeds a recorded transcript into fresh parties, ignoring what they send.
pub fn replay(
    mut parties: Vec<Party>,
    transcript: &Transcript,
) -> Result<SessionOutcome, SessionError> {
    for p in parties.iter_mut() {
        p.start();
    }
    for d in &transcript.deliveries {
        if let Some(p) = parties.iter_mut().find(|p| *p.identity() == d.to) {
            p.handle(&d.from, &d.frame);
            if let Some(report) = own_abort(p) {
                return Err(SessionError::Aborted {
                    report,
                    transcript: transcript.clone(),
                });
            }
        }
    }
    finish(parties, transcript.clone(), Vec::new())
}

fn dispatch(
    transport: &mut dyn Transport,
    from: &Identity,
    out: Vec<Outgoing>,
) -> Result<(), TransportError> {
    for o in out {
        transport.broadcast(from, &o.to, &o.message.encode())?;
    }
    Ok(())
}

fn own_abort(p: &Party) -> Option<AbortReport> {
    p.abort_report()
        .filter(|r| &r.reporter == p.identity())
        .cloned()
}

fn finish(
    parties: Vec<Party>,
    transcript: Transcript,
    unheard: Vec<AbortReport>,
) -> Result<SessionOutcome, SessionError> {
    if parties.iter().any(|p| p.phase() != Phase::Done) {
        let mut report = timeout_report(&parties);
        if report.blamed.as_str() == DRIVER_IDENTITY {
            if let Some(first) = unheard.into_iter().next() {
                report = first;
            }
        }
        return Err(SessionError::Aborted { report, transcript });
    }
    let duplicates_ignored = parties.iter().map(|p| p.duplicates().len()).sum();
    let verification = parties.iter().find_map(|p| p.verification().cloned());
    let signature = parties
        .iter()
        .find(|p| p.role() == dvmps_core::protocol::Role::Clerk)
        .and_then(|p| p.signature().cloned())
        .ok_or(SessionError::NoSignature)?;
    Ok(SessionOutcome {
        signature,
        verification,
        transcript,
        duplicates_ignored,
    })
}

/// Blames the party the most others are waiting on. Ties go first to a
/// party that is itself waiting on nobody, then to roster order.
pub fn timeout_report(parties: &[Party]) -> AbortReport {
    let mut counts: Vec<(Identity, usize)> = Vec::new();
    for p in parties {
        for id in p.awaiting() {
            match counts.iter_mut().find(|(c, _)| *c == id) {
                Some((_, n)) => *n += 1,
                None => counts.push((id, 1)),
            }
        }
    }
    let waits_on_nobody = |id: &Identity| {
        parties
            .iter()
            .find(|p| p.identity() == id)
            .is_none_or(|p| p.awaiting().is_empty())
    };
    let position = |id: &Identity| {
        parties
            .iter()
            .position(|p| p.identity() == id)
            .unwrap_or(usize::MAX)
    };
    let blamed = counts
        .into_iter()
        .max_by(|(a, na), (b, nb)| {
            na.cmp(nb)
                .then(waits_on_nobody(a).cmp(&waits_on_nobody(b)))
                .then(position(b).cmp(&position(a)))
        })
        .map(|(id, _)| id);
    let driver = Identity::new(DRIVER_IDENTITY).expect("valid label");
    AbortReport {
        blamed: blamed.unwrap_or_else(|| driver.clone()),
        reporter: driver,
        reason: AbortReason::Timeout,
        detail: String::new(),
    }
}
