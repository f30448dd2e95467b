use alloc::vec::Vec;

use sha2::{Digest, Sha256};

use super::{Identity, SchemeError};
use crate::codec::{DecodeError, Reader, Writer};

/// Upper bound on `n`, set by the 2-byte count in the encoding.
pub const MAX_PROXY_SIGNERS: usize = u16::MAX as usize;

/// Plain warrant contents, freely editable. Turn into a [`Warrant`] with
/// [`Warrant::new`] to validate and fix the encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarrantTerms {
    pub original_signer: Identity,
    pub proxy_signers: Vec<Identity>,
    pub designated_verifier: Identity,
    /// SHA-256 of the message the proxies may sign.
    pub message_digest: [u8; 32],
    pub not_before: u64,
    pub not_after: u64,
    pub policy: Vec<u8>,
}

impl WarrantTerms {
    pub fn digest_message(message: &[u8]) -> [u8; 32] {
        Sha256::digest(message).into()
    }
}

/// The validated delegation warrant `m_w`.
///
/// Encoding, each field length-prefixed in this order: original signer,
/// proxy list (2-byte count then length-prefixed identities), designated
/// verifier, message digest, `not_before`, `not_after`, policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warrant {
    terms: WarrantTerms,
    encoded: Vec<u8>,
}

impl Warrant {
    pub fn new(terms: WarrantTerms) -> Result<Self, SchemeError> {
        let n = terms.proxy_signers.len();
        if n == 0 {
            return Err(SchemeError::InvalidWarrant("no proxy signers"));
        }
        if n > MAX_PROXY_SIGNERS {
            return Err(SchemeError::InvalidWarrant("too many proxy signers"));
        }
        for (i, id) in terms.proxy_signers.iter().enumerate() {
            if terms.proxy_signers[..i].contains(id) {
                return Err(SchemeError::InvalidWarrant("duplicate proxy signer"));
            }
        }
        if terms.not_before >= terms.not_after {
            return Err(SchemeError::InvalidWarrant("empty validity window"));
        }
        let encoded = encode_terms(&terms);
        Ok(Self { terms, encoded })
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader::new(bytes);
        let original_signer = Reader::new(r.get_bytes()?).identity_field()?;

        let mut list = Reader::new(r.get_bytes()?);
        let count = list.get_u16()? as usize;
        if count > list.remaining() / 4 {
            return Err(DecodeError::CountOverflow);
        }
        let proxy_signers = (0..count)
            .map(|_| list.get_identity())
            .collect::<Result<Vec<_>, _>>()?;
        list.finish()?;

        let designated_verifier = Reader::new(r.get_bytes()?).identity_field()?;
        let message_digest = fixed_field::<32>(&mut r)?;
        let not_before = u64::from_be_bytes(fixed_field::<8>(&mut r)?);
        let not_after = u64::from_be_bytes(fixed_field::<8>(&mut r)?);
        let policy = r.get_bytes()?.to_vec();
        r.finish()?;

        let terms = WarrantTerms {
            original_signer,
            proxy_signers,
            designated_verifier,
            message_digest,
            not_before,
            not_after,
            policy,
        };
        Warrant::new(terms).map_err(|e| match e {
            SchemeError::InvalidWarrant(why) => DecodeError::InvalidValue(why),
            _ => DecodeError::InvalidValue("warrant"),
        })
    }

    /// Canonical bytes; this is `m_w` as fed to H2.
    pub fn encoded(&self) -> &[u8] {
        &self.encoded
    }

    pub fn terms(&self) -> &WarrantTerms {
        &self.terms
    }

    pub fn into_terms(self) -> WarrantTerms {
        self.terms
    }

    pub fn original_signer(&self) -> &Identity {
        &self.terms.original_signer
    }

    pub fn proxy_signers(&self) -> &[Identity] {
        &self.terms.proxy_signers
    }

    pub fn signer_count(&self) -> usize {
        self.terms.proxy_signers.len()
    }

    pub fn designated_verifier(&self) -> &Identity {
        &self.terms.designated_verifier
    }

    pub fn message_digest(&self) -> &[u8; 32] {
        &self.terms.message_digest
    }

    pub fn not_before(&self) -> u64 {
        self.terms.not_before
    }

    pub fn not_after(&self) -> u64 {
        self.terms.not_after
    }

    pub fn policy(&self) -> &[u8] {
        &self.terms.policy
    }

    pub fn names_proxy(&self, id: &Identity) -> bool {
        self.terms.proxy_signers.contains(id)
    }

    /// True if `message` is the one the warrant authorizes.
    pub fn covers(&self, message: &[u8]) -> bool {
        WarrantTerms::digest_message(message) == self.terms.message_digest
    }
}

fn encode_terms(t: &WarrantTerms) -> Vec<u8> {
    let mut list = Writer::new();
    list.put_u16(t.proxy_signers.len() as u16);
    for id in &t.proxy_signers {
        list.put_identity(id);
    }
    let mut w = Writer::new();
    w.put_bytes(t.original_signer.as_bytes())
        .put_bytes(&list.into_bytes())
        .put_bytes(t.designated_verifier.as_bytes())
        .put_bytes(&t.message_digest)
        .put_bytes(&t.not_before.to_be_bytes())
        .put_bytes(&t.not_after.to_be_bytes())
        .put_bytes(&t.policy);
    w.into_bytes()
}

fn fixed_field<const N: usize>(r: &mut Reader<'_>) -> Result<[u8; N], DecodeError> {
    let raw = r.get_bytes()?;
    if raw.len() != N {
        return Err(DecodeError::BadFieldLength {
            expected: N,
            found: raw.len(),
        });
    }
    let mut out = [0u8; N];
    out.copy_from_slice(raw);
    Ok(out)
}

impl Reader<'_> {
    /// The whole remaining input as one identity.
    fn identity_field(self) -> Result<Identity, DecodeError> {
        let label = core::str::from_utf8(self.rest()).map_err(|_| DecodeError::InvalidIdentity)?;
        Identity::new(label).map_err(|_| DecodeError::InvalidIdentity)
    }
}
