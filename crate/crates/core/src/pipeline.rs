//! The full honest flow in one process, with per-phase operation counts.
//! Backs the bench command and end-to-end tests.

use alloc::format;
use alloc::vec::Vec;

use rand_core::{CryptoRng, RngCore};

use crate::algebra::OpCounters;
use crate::scheme::{
    aggregate, commit, delegate, derive_proxy_key, extract_key, partial_sign, verify_mps,
    Commitment, Delegation, Identity, MasterSecret, MultiProxySignature, PartialSignature,
    ProxyKey, SchemeError, SystemParams, TraceInputs, UserKeyPair, Verdict, Warrant, WarrantTerms,
};

pub const ORIGINAL_SIGNER: &str = "alice";
pub const VERIFIER: &str = "cindy";
pub const NOT_BEFORE: u64 = 1_700_000_000;
pub const NOT_AFTER: u64 = 1_900_000_000;
/// A time inside the default validity window.
pub const NOW: u64 = 1_800_000_000;

/// Published per-phase tallies for this scheme: proxy key generation,
/// signature generation, verification.
pub const REFERENCE_PHASES: [OpCounters; 3] = [
    OpCounters::tally(2, 3, 1, 3, 0),
    OpCounters::tally(1, 4, 1, 3, 1),
    OpCounters::tally(2, 0, 1, 3, 0),
];
/// Published single-signer total for this scheme.
pub const REFERENCE_TOTAL: OpCounters = OpCounters::tally(5, 8, 3, 9, 0);
/// Published single-signer total of the non-designated predecessor scheme.
/// Display only.
pub const COMPARISON_TOTAL: OpCounters = OpCounters::tally(6, 5, 8, 8, 0);

/// Label of the `i`-th proxy signer, counting from 1.
pub fn proxy_label(i: usize) -> alloc::string::String {
    format!("proxy-{i}")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseCounts {
    pub proxy_keygen: OpCounters,
    pub generation: OpCounters,
    pub verification: OpCounters,
}

impl PhaseCounts {
    pub fn total(&self) -> OpCounters {
        self.proxy_keygen + self.generation + self.verification
    }

    pub fn as_array(&self) -> [OpCounters; 3] {
        [self.proxy_keygen, self.generation, self.verification]
    }
}

#[derive(Clone, Debug)]
pub struct HonestRun {
    pub original: UserKeyPair,
    pub proxies: Vec<UserKeyPair>,
    pub verifier: UserKeyPair,
    pub delegation: Delegation,
    pub proxy_keys: Vec<ProxyKey>,
    pub commitments: Vec<Commitment>,
    pub partials: Vec<PartialSignature>,
    pub signature: MultiProxySignature,
    pub verdict: Verdict,
    pub phases: PhaseCounts,
}

impl HonestRun {
    pub fn proxy_pubs(&self) -> Vec<crate::algebra::GroupElement> {
        self.proxies.iter().map(|k| k.public).collect()
    }

    pub fn trace_inputs(&self) -> TraceInputs<'_> {
        TraceInputs {
            signature: &self.signature,
            delegation: &self.delegation,
            original: &self.original,
            proxies: &self.proxies,
            proxy_keys: &self.proxy_keys,
            partials: &self.partials,
            verifier: &self.verifier,
        }
    }
}

/// Warrant naming `alice`, `proxy-1..n` and `cindy` over `message`, valid
/// in the default window.
pub fn default_warrant(n: usize, message: &[u8]) -> Result<Warrant, SchemeError> {
    Warrant::new(WarrantTerms {
        original_signer: Identity::new(ORIGINAL_SIGNER)?,
        proxy_signers: (1..=n)
            .map(|i| Identity::new(proxy_label(i)))
            .collect::<Result<_, _>>()?,
        designated_verifier: Identity::new(VERIFIER)?,
        message_digest: WarrantTerms::digest_message(message),
        not_before: NOT_BEFORE,
        not_after: NOT_AFTER,
        policy: Vec::new(),
    })
}

/// Extracts keys for every party, then runs delegation, proxy key
/// derivation, both signing rounds, aggregation by `proxy-1` and
/// verification at [`NOW`]. Key extraction is not part of any phase count.
pub fn run_honest<R: RngCore + CryptoRng + ?Sized>(
    params: &SystemParams,
    master: &MasterSecret,
    n: usize,
    message: &[u8],
    rng: &mut R,
) -> Result<HonestRun, SchemeError> {
    let warrant = default_warrant(n, message)?;
    let mut setup_ops = OpCounters::new();
    let extract = |id: &Identity, ops: &mut OpCounters| extract_key(params, master, id, ops);
    let original = extract(warrant.original_signer(), &mut setup_ops)?;
    let verifier = extract(warrant.designated_verifier(), &mut setup_ops)?;
    let proxies = warrant
        .proxy_signers()
        .iter()
        .map(|id| extract(id, &mut setup_ops))
        .collect::<Result<Vec<_>, _>>()?;
    let proxy_pubs: Vec<_> = proxies.iter().map(|k| k.public).collect();

    let mut keygen = OpCounters::new();
    let delegation = delegate(
        params,
        &original,
        &verifier.public,
        warrant,
        rng,
        &mut keygen,
    )?;
    let proxy_keys = proxies
        .iter()
        .map(|k| derive_proxy_key(params, &delegation, k, &original.public, &mut keygen))
        .collect::<Result<Vec<_>, _>>()?;

    let mut generation = OpCounters::new();
    let (commitments, secrets): (Vec<_>, Vec<_>) = proxy_keys
        .iter()
        .map(|k| commit(params, k, &verifier.public, rng, &mut generation))
        .unzip();
    let partials = proxy_keys
        .iter()
        .zip(&secrets)
        .map(|(k, s)| partial_sign(params, k, s, &commitments, &mut generation))
        .collect::<Result<Vec<_>, _>>()?;
    let signature = aggregate(
        params,
        &partials,
        &delegation,
        &original.public,
        &proxy_pubs,
        &mut generation,
    )?;

    let mut verification = OpCounters::new();
    let verdict = verify_mps(
        params,
        &signature,
        &verifier,
        &original.public,
        &proxy_pubs,
        NOW,
        &mut verification,
    )?;

    Ok(HonestRun {
        original,
        proxies,
        verifier,
        delegation,
        proxy_keys,
        commitments,
        partials,
        signature,
        verdict,
        phases: PhaseCounts {
            proxy_keygen: keygen,
            generation,
            verification,
        },
    })
}
