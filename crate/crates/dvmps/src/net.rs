//! Transports that carry encoded protocol frames between parties.

use std::collections::{BTreeMap, VecDeque};
use std::io::{self, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::time::Duration;

use dvmps_core::protocol::{frame_body_len, MessageKind, ProtocolMessage};
use dvmps_core::scheme::Identity;

#[derive(Debug, thiserror::Error)]
pub enum TransportError {
    #[error("no route to {0}")]
    UnknownPeer(Identity),
    #[error("malformed frame on the wire")]
    BadFrame,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One frame handed to its recipient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delivery {
    pub from: Identity,
    pub to: Identity,
    pub frame: Vec<u8>,
}

/// Point-to-point frame delivery. Frames between one sender and one
/// recipient arrive in order; a lost frame only shows up as a timeout.
pub trait Transport {
    fn send(&mut self, from: &Identity, to: &Identity, frame: &[u8]) -> Result<(), TransportError>;

    fn broadcast(
        &mut self,
        from: &Identity,
        to: &[Identity],
        frame: &[u8],
    ) -> Result<(), TransportError> {
        to.iter().try_for_each(|peer| self.send(from, peer, frame))
    }

    /// The next frame for any party, or `None` if nothing arrives within
    /// `timeout` ticks. A tick is a logical step for the in-memory network
    /// and a millisecond for sockets.
    fn receive(&mut self, timeout: u64) -> Result<Option<Delivery>, TransportError>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultAction {
    Drop,
    /// Hold the frame back for this many ticks.
    Delay(u64),
    /// Deliver the frame twice in a row.
    Duplicate,
}

/// Applies `action` to frames matching every filter that is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultRule {
    pub from: Option<Identity>,
    pub to: Option<Identity>,
    pub kind: Option<MessageKind>,
    pub action: FaultAction,
}

impl FaultRule {
    pub fn all(action: FaultAction) -> Self {
        Self {
            from: None,
            to: None,
            kind: None,
            action,
        }
    }

    pub fn from(sender: &Identity, action: FaultAction) -> Self {
        Self {
            from: Some(sender.clone()),
            ..Self::all(action)
        }
    }

    pub fn kind(mut self, kind: MessageKind) -> Self {
        self.kind = Some(kind);
        self
    }

    fn matches(&self, from: &Identity, to: &Identity, kind: Option<MessageKind>) -> bool {
        self.from.as_ref().is_none_or(|f| f == from)
            && self.to.as_ref().is_none_or(|t| t == to)
            && self.kind.is_none_or(|k| Some(k) == kind)
    }
}

/// Ordered rules; the first match wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultPlan {
    pub rules: Vec<FaultRule>,
}

impl FaultPlan {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with(mut self, rule: FaultRule) -> Self {
        self.rules.push(rule);
        self
    }

    fn action_for(&self, from: &Identity, to: &Identity, frame: &[u8]) -> Option<FaultAction> {
        let kind = ProtocolMessage::decode(frame).ok().map(|m| m.kind);
        self.rules
            .iter()
            .find(|r| r.matches(from, to, kind))
            .map(|r| r.action)
    }
}

/// Single global FIFO queue with a logical clock. Deterministic: the same
/// sends and fault plan always yield the same delivery order.
#[derive(Debug, Default)]
pub struct InMemoryNetwork {
    queue: VecDeque<(u64, Delivery)>,
    clock: u64,
    plan: FaultPlan,
    dropped: usize,
}

impl InMemoryNetwork {
    pub fn new(plan: FaultPlan) -> Self {
        Self {
            plan,
            ..Self::default()
        }
    }

    /// Frames discarded by the fault plan so far.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn in_flight(&self) -> usize {
        self.queue.len()
    }
}

impl Transport for InMemoryNetwork {
    fn send(&mut self, from: &Identity, to: &Identity, frame: &[u8]) -> Result<(), TransportError> {
        let delivery = Delivery {
            from: from.clone(),
            to: to.clone(),
            frame: frame.to_vec(),
        };
        match self.plan.action_for(from, to, frame) {
            None => self.queue.push_back((self.clock, delivery)),
            Some(FaultAction::Drop) => self.dropped += 1,
            Some(FaultAction::Delay(ticks)) => self.queue.push_back((self.clock + ticks, delivery)),
            Some(FaultAction::Duplicate) => {
                self.queue.push_back((self.clock, delivery.clone()));
                self.queue.push_back((self.clock, delivery));
            }
        }
        Ok(())
    }

    fn receive(&mut self, timeout: u64) -> Result<Option<Delivery>, TransportError> {
        let deadline = self.clock + timeout;
        loop {
            self.clock += 1;
            if let Some(idx) = self
                .queue
                .iter()
                .position(|(ready, _)| *ready <= self.clock)
            {
                return Ok(self.queue.remove(idx).map(|(_, d)| d));
            }
            if self.clock >= deadline || self.queue.is_empty() {
                return Ok(None);
            }
        }
    }
}

/// Real sockets on 127.0.0.1, one listener per party. Frames use the same
/// length-prefixed framing as everywhere else; delivery follows global send
/// order so runs match the in-memory network frame for frame.
#[derive(Debug)]
pub struct LoopbackTcp {
    listeners: BTreeMap<Identity, (TcpListener, SocketAddr)>,
    links: BTreeMap<(Identity, Identity), (TcpStream, TcpStream)>,
    pending: VecDeque<(Identity, Identity)>,
}

impl LoopbackTcp {
    pub fn bind(parties: &[Identity]) -> Result<Self, TransportError> {
        let mut listeners = BTreeMap::new();
        for id in parties {
            let listener = TcpListener::bind(("127.0.0.1", 0))?;
            let addr = listener.local_addr()?;
            listeners.insert(id.clone(), (listener, addr));
        }
        Ok(Self {
            listeners,
            links: BTreeMap::new(),
            pending: VecDeque::new(),
        })
    }

    pub fn address_of(&self, id: &Identity) -> Option<SocketAddr> {
        self.listeners.get(id).map(|(_, addr)| *addr)
    }

    fn link(
        &mut self,
        from: &Identity,
        to: &Identity,
    ) -> Result<&mut (TcpStream, TcpStream), TransportError> {
        let key = (from.clone(), to.clone());
        if !self.links.contains_key(&key) {
            let (listener, addr) = self
                .listeners
                .get(to)
                .ok_or_else(|| TransportError::UnknownPeer(to.clone()))?;
            let writer = TcpStream::connect(addr)?;
            writer.set_nodelay(true)?;
            let (reader, _) = listener.accept()?;
            self.links.insert(key.clone(), (writer, reader));
        }
        Ok(self.links.get_mut(&key).expect("inserted above"))
    }
}

impl Transport for LoopbackTcp {
    fn send(&mut self, from: &Identity, to: &Identity, frame: &[u8]) -> Result<(), TransportError> {
        let (writer, _) = self.link(from, to)?;
        writer.write_all(frame)?;
        self.pending.push_back((from.clone(), to.clone()));
        Ok(())
    }

    fn receive(&mut self, timeout: u64) -> Result<Option<Delivery>, TransportError> {
        let Some((from, to)) = self.pending.pop_front() else {
            return Ok(None);
        };
        let (_, reader) = self.link(&from, &to)?;
        reader.set_read_timeout(Some(Duration::from_millis(timeout.max(1))))?;
        let mut header = [0u8; 4];
        reader.read_exact(&mut header)?;
        let len = frame_body_len(header).map_err(|_| TransportError::BadFrame)?;
        let mut frame = vec![0u8; 4 + len];
        frame[..4].copy_from_slice(&header);
        reader.read_exact(&mut frame[4..])?;
        Ok(Some(Delivery { from, to, frame }))
    }
}
