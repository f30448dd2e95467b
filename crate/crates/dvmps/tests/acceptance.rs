//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs with `harness = false`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dvmps::cli::check_with_key;
use dvmps::net::{FaultAction, FaultPlan, FaultRule, InMemoryNetwork};
use dvmps::session::{full_parties, replay, run_session, SessionLimits, Transcript};
use dvmps_core::algebra::{CurveParams, GroupElement, OpCounters, Scalar};
use dvmps_core::codec::{self, parse_fixture, Fixture};
use dvmps_core::pipeline::{self, run_honest, HonestRun};
use dvmps_core::protocol::{AbortReason, Behavior, MessageKind, SessionConfig, SessionMode};
use dvmps_core::scheme::{
    self, correctness_trace, forge_without_proxy_secrets, verify_delegation, verify_partial,
    Commitment, Delegation, Identity, MasterSecret, MultiProxySignature, PartialSignature,
    SystemParams, UserKeyPair, Verdict, Warrant, WarrantTerms, H2_TAG,
};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

const CORRECTNESS_DEMO_BUDGET: Duration = Duration::from_secs(5);
const SOUNDNESS_DEMO_BUDGET: Duration = Duration::from_secs(120);
const SOUNDNESS_SIGNER_COUNTS: [usize; 5] = [1, 2, 3, 5, 10];
const SOUNDNESS_SEEDS: u64 = 20;
/// Allowed distance of measured H and M totals from the published 5H and 8M.
const HM_TOLERANCE: u64 = 2;
const DELEGATION_TRIALS: usize = 100;
const CLERK_TRIALS: usize = 50;
const WARRANT_MUTATIONS: usize = 50;
const DECOY_VERIFIERS: [&str; 6] = ["bob", "dave", "erin", "frank", "alice", "proxy-1"];
const FUZZ_CASES: usize = 10_000;
const FAULT_SCENARIOS: u64 = 50;

type Outcome = Result<String, String>;

fn main() -> ExitCode {
    let toy = scheme::setup("toy", b"acceptance toy").unwrap();
    let demo = scheme::setup("demo", b"acceptance demo").unwrap();
    let criteria: [(&str, &dyn Fn() -> Outcome); 9] = [
        ("correctness chain", &|| correctness_chain(&toy, &demo)),
        ("end-to-end soundness", &|| soundness(&demo)),
        ("operation counts", &|| operation_counts(&demo)),
        ("delegation equation", &|| delegation_equation(&demo)),
        ("clerk equation", &|| clerk_equation(&demo)),
        ("security negatives", &|| security_negatives(&demo)),
        ("algebra properties", &algebra_properties),
        ("determinism and codec", &determinism_and_codec),
        ("protocol harness", &|| protocol_harness(&toy)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| Err(panic_text(p)));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    let msg = p
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default();
    format!("panicked: {msg}")
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn ops() -> OpCounters {
    OpCounters::new()
}

fn id(s: &str) -> Identity {
    Identity::new(s).unwrap()
}

fn honest(set: &(SystemParams, MasterSecret), n: usize, seed: u64) -> Result<HonestRun, String> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    run_honest(&set.0, &set.1, n, b"acceptance message", &mut rng)
        .map_err(|e| format!("n={n} seed={seed}: {e}"))
}

fn random_point(curve: &CurveParams, rng: &mut ChaCha20Rng) -> GroupElement {
    let k = curve.scalar_field().random_nonzero(rng);
    curve.scalar_mul(&k, curve.generator(), &mut ops())
}

/// Five trace lines of an honest n = 3 run, all equal to `e(Z_P, Q_C)`
/// computed directly.
fn correctness_chain(
    toy: &(SystemParams, MasterSecret),
    demo: &(SystemParams, MasterSecret),
) -> Outcome {
    let mut timing = Duration::ZERO;
    for (label, set) in [("toy", toy), ("demo", demo)] {
        let started = Instant::now();
        let run = honest(set, 3, 1)?;
        let lines = correctness_trace(&set.0, &run.trace_inputs()).map_err(|e| e.to_string())?;
        timing = started.elapsed();
        let curve = set.0.curve();
        let direct = curve.pairing(&run.signature.z, &run.verifier.public, &mut ops());
        for (i, line) in lines.iter().enumerate() {
            ensure(*line == direct, || {
                format!("{label}: line {} differs from e(Z_P, Q_C)", i + 1)
            })?;
        }
    }
    ensure(timing < CORRECTNESS_DEMO_BUDGET, || {
        format!("demo took {timing:?}")
    })?;
    Ok(format!(
        "5/5 lines equal on toy and demo; demo {:.2}s < {}s",
        timing.as_secs_f64(),
        CORRECTNESS_DEMO_BUDGET.as_secs()
    ))
}

fn soundness(demo: &(SystemParams, MasterSecret)) -> Outcome {
    let started = Instant::now();
    let mut runs = 0;
    for &n in &SOUNDNESS_SIGNER_COUNTS {
        for seed in 0..SOUNDNESS_SEEDS {
            let run = honest(demo, n, 1_000 * n as u64 + seed)?;
            ensure(run.verdict == Verdict::Accept, || {
                format!("n={n} seed={seed} rejected")
            })?;
            runs += 1;
        }
    }
    let took = started.elapsed();
    ensure(took < SOUNDNESS_DEMO_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "{runs}/{runs} accepted on demo in {:.1}s",
        took.as_secs_f64()
    ))
}

fn operation_counts(demo: &(SystemParams, MasterSecret)) -> Outcome {
    let run = honest(demo, 1, 7)?;
    let phases = run.phases.as_array();
    let total = run.phases.total();
    let reference = pipeline::REFERENCE_TOTAL;
    ensure(
        total.pairings == reference.pairings && total.exponentiations == reference.exponentiations,
        || format!("total {total} vs {reference}"),
    )?;
    for (i, (m, r)) in phases.iter().zip(pipeline::REFERENCE_PHASES).enumerate() {
        ensure(
            m.pairings == r.pairings && m.exponentiations == r.exponentiations,
            || format!("phase {}: {m} vs {r}", i + 1),
        )?;
    }
    let dh = total.hashes.abs_diff(reference.hashes);
    let dm = total.scalar_mults.abs_diff(reference.scalar_mults);
    ensure(dh <= HM_TOLERANCE && dm <= HM_TOLERANCE, || {
        format!("H off by {dh}, M off by {dm}")
    })?;
    let per_phase = |f: fn(&OpCounters) -> u64| {
        phases
            .iter()
            .map(|c| f(c).to_string())
            .collect::<Vec<_>>()
            .join("/")
    };
    Ok(format!(
        "measured {total} vs reference {reference}; P {} E {} per phase; H {:+} M {:+} within ±{HM_TOLERANCE} \
         (one H per hash call, one M per scalar multiplication; the reference's I=1 has no counterpart, measured I={})",
        per_phase(|c| c.pairings),
        per_phase(|c| c.exponentiations),
        total.hashes as i64 - reference.hashes as i64,
        total.scalar_mults as i64 - reference.scalar_mults as i64,
        total.inversions,
    ))
}

/// A decodable warrant differing from `w` in exactly one byte.
fn mutate_warrant(w: &Warrant, rng: &mut ChaCha20Rng) -> Warrant {
    let bytes = w.encoded();
    loop {
        let mut m = bytes.to_vec();
        let i = rng.next_u32() as usize % m.len();
        m[i] ^= 1 << (rng.next_u32() % 8);
        if let Ok(mw) = Warrant::decode(&m) {
            if mw != *w {
                return mw;
            }
        }
    }
}

fn delegation_equation(demo: &(SystemParams, MasterSecret)) -> Outcome {
    let (params, master) = demo;
    let curve = params.curve();
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let original =
        scheme::extract_key(params, master, &id(pipeline::ORIGINAL_SIGNER), &mut ops()).unwrap();
    let verifier =
        scheme::extract_key(params, master, &id(pipeline::VERIFIER), &mut ops()).unwrap();
    let (mut accepted, mut rejected) = (0, 0);
    let mut kinds = [0; 3];
    for i in 0..DELEGATION_TRIALS {
        let msg = format!("delegation trial {i}");
        let warrant = pipeline::default_warrant(1 + i % 4, msg.as_bytes()).unwrap();
        let d = scheme::delegate(
            params,
            &original,
            &verifier.public,
            warrant,
            &mut rng,
            &mut ops(),
        )
        .unwrap();
        let v = verify_delegation(params, &d, &original.public, &mut ops());
        ensure(v == Verdict::Accept, || {
            format!("honest delegation {i} rejected")
        })?;
        accepted += 1;

        let mut bad: Delegation = d.clone();
        match i % 3 {
            0 => bad.u = curve.add(&bad.u, &random_point(curve, &mut rng)),
            1 => bad.v = curve.add(&bad.v, &random_point(curve, &mut rng)),
            _ => bad.warrant = mutate_warrant(&d.warrant, &mut rng),
        }
        kinds[i % 3] += 1;
        let v = verify_delegation(params, &bad, &original.public, &mut ops());
        ensure(v == Verdict::Reject, || {
            format!("mutation {i} (kind {}) accepted", i % 3)
        })?;
        rejected += 1;
    }
    Ok(format!(
        "{accepted}/{DELEGATION_TRIALS} honest accepted, {rejected}/{DELEGATION_TRIALS} mutations rejected (U {}, V {}, warrant byte {})",
        kinds[0], kinds[1], kinds[2]
    ))
}

fn aggregate_z(curve: &CurveParams, commitments: &[Commitment]) -> GroupElement {
    curve.sum(commitments.iter().map(|c| &c.z))
}

fn check_partials(params: &SystemParams, run: &HonestRun, z: &GroupElement) -> Vec<Verdict> {
    run.partials
        .iter()
        .zip(&run.proxies)
        .map(|(p, k)| {
            verify_partial(
                params,
                p,
                z,
                &run.delegation,
                &k.public,
                &run.original.public,
                &mut ops(),
            )
        })
        .collect()
}

/// Replaces one commitment with a fresh one from the same signer.
fn swap_commitment(
    set: &(SystemParams, MasterSecret),
    run: &HonestRun,
    which: usize,
    rng: &mut ChaCha20Rng,
) -> Vec<Commitment> {
    let mut cs = run.commitments.clone();
    let (fresh, _) = scheme::commit(
        &set.0,
        &run.proxy_keys[which],
        &run.verifier.public,
        rng,
        &mut ops(),
    );
    cs[which] = fresh;
    cs
}

fn clerk_equation(demo: &(SystemParams, MasterSecret)) -> Outcome {
    let curve = demo.0.curve();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let (mut honest_ok, mut mismatched_rejected, mut seed) = (0, 0, 500);
    while honest_ok < CLERK_TRIALS || mismatched_rejected < CLERK_TRIALS {
        let run = honest(demo, 1 + seed as usize % 3, seed)?;
        seed += 1;
        let z = aggregate_z(curve, &run.commitments);
        for v in check_partials(&demo.0, &run, &z) {
            ensure(v == Verdict::Accept, || {
                format!("honest partial rejected (seed {seed})")
            })?;
            honest_ok += 1;
        }
        let which = rng.next_u32() as usize % run.commitments.len();
        let wrong = aggregate_z(curve, &swap_commitment(demo, &run, which, &mut rng));
        for v in check_partials(&demo.0, &run, &wrong) {
            ensure(v == Verdict::Reject, || {
                format!("partial accepted under mismatched set (seed {seed})")
            })?;
            mismatched_rejected += 1;
        }
    }
    Ok(format!("{honest_ok} honest partials accepted, {mismatched_rejected} rejected against mismatched commitment sets"))
}

fn security_negatives(demo: &(SystemParams, MasterSecret)) -> Outcome {
    let (params, master) = demo;
    let mut rng = ChaCha20Rng::seed_from_u64(6);

    // (a) proxy protection
    for n in [1, 3] {
        let run = honest(demo, n, 600 + n as u64)?;
        let forged = forge_without_proxy_secrets(
            params,
            &run.original,
            run.delegation.warrant.clone(),
            &run.verifier.public,
            &mut rng,
            &mut ops(),
        )
        .map_err(|e| e.to_string())?;
        let v = scheme::verify_mps(
            params,
            &forged,
            &run.verifier,
            &run.original.public,
            &run.proxy_pubs(),
            pipeline::NOW,
            &mut ops(),
        )
        .map_err(|e| e.to_string())?;
        ensure(v == Verdict::Reject, || {
            format!("(a) forgery accepted for n={n}")
        })?;
    }

    // (b) warrant misuse
    let run = honest(demo, 3, 610)?;
    let cindy = &run.verifier;
    ensure(
        check_with_key(params, &run.signature, cindy).map_err(|e| e.to_string())?
            == Verdict::Accept,
        || "(b) honest signature rejected".into(),
    )?;
    for i in 0..WARRANT_MUTATIONS {
        let mut sig: MultiProxySignature = run.signature.clone();
        sig.warrant = mutate_warrant(&run.signature.warrant, &mut rng);
        let v = check_with_key(params, &sig, cindy).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Reject, || {
            format!("(b) mutated warrant {i} accepted")
        })?;
    }

    // (c) strongness: other users' secrets against the designated verifier
    for decoy in DECOY_VERIFIERS {
        let key: UserKeyPair = scheme::extract_key(params, master, &id(decoy), &mut ops()).unwrap();
        let v = check_with_key(params, &run.signature, &key).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Reject, || {
            format!("(c) {decoy}'s key accepted")
        })?;
    }

    // (d) the clerk changes Z_P after partials arrived
    let mut invalidated = 0;
    for which in 0..run.commitments.len() {
        let wrong = aggregate_z(
            params.curve(),
            &swap_commitment(demo, &run, which, &mut rng),
        );
        let verdicts = check_partials(params, &run, &wrong);
        ensure(verdicts.iter().all(|v| *v == Verdict::Reject), || {
            format!("(d) a partial survived change of Z_P{}", which + 1)
        })?;
        invalidated += verdicts.len();
    }
    Ok(format!(
        "(a) forgeries rejected n=1,3; (b) {WARRANT_MUTATIONS}/{WARRANT_MUTATIONS} mutated warrants rejected; \
         (c) {}/{} decoy verifier keys rejected; (d) {invalidated}/{invalidated} partials invalidated",
        DECOY_VERIFIERS.len(),
        DECOY_VERIFIERS.len()
    ))
}

fn algebra_properties() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut summary = Vec::new();
    for (label, curve, bilinear) in [
        ("toy", CurveParams::toy(), 100),
        ("demo", CurveParams::demo(), 10),
    ] {
        let fr = curve.scalar_field();
        let g = *curve.generator();
        let o = &mut ops();
        let e = curve.pairing(&g, &g, o);
        ensure(
            !curve.gt_is_one(&e) && curve.gt_is_one(&curve.gt_pow_uint(&e, curve.q())),
            || format!("{label}: e(P, P) is not of order q"),
        )?;
        for _ in 0..bilinear {
            let (a, b) = (fr.random_nonzero(&mut rng), fr.random_nonzero(&mut rng));
            let lhs = curve.pairing(
                &curve.scalar_mul(&a, &g, o),
                &curve.scalar_mul(&b, &g, o),
                o,
            );
            ensure(lhs == curve.gt_pow(&e, &fr.mul(&a, &b), o), || {
                format!("{label}: bilinearity")
            })?;
        }
        let (mut pos, mut neg) = (0, 0);
        for i in 0..100 {
            let (a, b) = (fr.random_nonzero(&mut rng), fr.random_nonzero(&mut rng));
            let ab = fr.mul(&a, &b);
            let c: Scalar = if i % 2 == 0 {
                ab
            } else {
                fr.add(&ab, &fr.random_nonzero(&mut rng))
            };
            let decided = curve.pairing(
                &curve.scalar_mul(&a, &g, o),
                &curve.scalar_mul(&b, &g, o),
                o,
            ) == curve.pairing(&g, &curve.scalar_mul(&c, &g, o), o);
            ensure(decided == (c == ab), || {
                format!("{label}: DDH instance {i} decided wrongly")
            })?;
            if c == ab {
                pos += 1
            } else {
                neg += 1
            }
        }
        summary.push(format!(
            "{label}: {bilinear} bilinear, DDH {pos}+/{neg}- correct"
        ));
    }
    Ok(format!("non-degenerate; {}", summary.join("; ")))
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load_fixture(rel: &str) -> Fixture {
    parse_fixture(&std::fs::read_to_string(fixtures_dir().join(rel)).unwrap()).unwrap()
}

fn pinned_warrant(proxies: &[&str], message: &[u8], window: (u64, u64), policy: &[u8]) -> Warrant {
    Warrant::new(WarrantTerms {
        original_signer: id("alice"),
        proxy_signers: proxies.iter().map(|p| id(p)).collect(),
        designated_verifier: id("cindy"),
        message_digest: WarrantTerms::digest_message(message),
        not_before: window.0,
        not_after: window.1,
        policy: policy.to_vec(),
    })
    .unwrap()
}

fn check_h2_fixtures() -> Result<usize, String> {
    let single = pinned_warrant(&["proxy-1"], b"m", (1, 2), b"p");
    let triple = pinned_warrant(
        &["proxy-1", "proxy-2", "proxy-3"],
        b"joint statement of the proxy group",
        (1_700_000_000, 1_900_000_000),
        b"",
    );
    let toy = CurveParams::toy();
    let demo = CurveParams::demo();
    let g = *toy.generator();
    let cases = [
        ("toy", &toy, "single_generator", &single, g),
        ("toy", &toy, "single_neg_generator", &single, toy.neg(&g)),
        (
            "toy",
            &toy,
            "triple_infinity",
            &triple,
            GroupElement::INFINITY,
        ),
        (
            "demo",
            &demo,
            "triple_infinity",
            &triple,
            GroupElement::INFINITY,
        ),
    ];
    let mut checked = 0;
    for (set, curve, name, w, pt) in cases {
        let fx = load_fixture(&format!("{set}/h2-inputs.txt"));
        let input = curve.hash_to_scalar_input(w.encoded(), &pt, H2_TAG);
        ensure(
            input == fx.get(&format!("h2_input_{name}")).unwrap(),
            || format!("{set} h2_input_{name} changed"),
        )?;
        let h = curve.hash_to_scalar(w.encoded(), &pt, H2_TAG, &mut ops());
        ensure(
            codec::encode_scalar(curve, &h) == fx.get(&format!("h2_value_{name}")).unwrap(),
            || format!("{set} h2_value_{name} changed"),
        )?;
        checked += 2;
    }
    for (set, fx_name, w) in [
        ("toy", "warrant_single", &single),
        ("toy", "warrant_triple", &triple),
        ("demo", "warrant_triple", &triple),
    ] {
        let fx = load_fixture(&format!("{set}/h2-inputs.txt"));
        ensure(w.encoded() == fx.get(fx_name).unwrap(), || {
            format!("{set} {fx_name} changed")
        })?;
        checked += 1;
    }
    Ok(checked)
}

fn random_identity(rng: &mut ChaCha20Rng) -> Identity {
    let len = 1 + rng.next_u32() as usize % 12;
    let s: String = (0..len)
        .map(|_| (b'a' + (rng.next_u32() % 26) as u8) as char)
        .collect();
    Identity::new(s).unwrap()
}

fn random_warrant(rng: &mut ChaCha20Rng) -> Warrant {
    let n = 1 + rng.next_u32() as usize % 5;
    let mut proxies: Vec<Identity> = Vec::new();
    while proxies.len() < n {
        let p = random_identity(rng);
        if !proxies.contains(&p) {
            proxies.push(p);
        }
    }
    let mut digest = [0u8; 32];
    rng.fill_bytes(&mut digest);
    let mut policy = vec![0u8; rng.next_u32() as usize % 17];
    rng.fill_bytes(&mut policy);
    let not_before = rng.next_u64() >> 1;
    Warrant::new(WarrantTerms {
        original_signer: random_identity(rng),
        proxy_signers: proxies,
        designated_verifier: random_identity(rng),
        message_digest: digest,
        not_before,
        not_after: not_before + 1 + (rng.next_u64() >> 2),
        policy,
    })
    .unwrap()
}

/// Round-trips every encodable type once and checks re-encoding is stable.
fn fuzz_case(curve: &CurveParams, rng: &mut ChaCha20Rng) -> Result<(), String> {
    fn same<T: PartialEq + std::fmt::Debug>(
        what: &str,
        a: &T,
        b: &T,
        ea: &[u8],
        eb: &[u8],
    ) -> Result<(), String> {
        ensure(a == b && ea == eb, || format!("{what} round trip: {a:?}"))
    }
    let fr = curve.scalar_field();
    let pt = |rng: &mut ChaCha20Rng| {
        if rng.next_u32().is_multiple_of(16) {
            GroupElement::INFINITY
        } else {
            random_point(curve, rng)
        }
    };
    let p = pt(rng);
    let e = codec::encode_point(curve, &p);
    same(
        "point",
        &p,
        &codec::decode_point(curve, &e).unwrap(),
        &e,
        &codec::encode_point(curve, &codec::decode_point(curve, &e).unwrap()),
    )?;

    let s = if rng.next_u32().is_multiple_of(16) {
        fr.zero()
    } else {
        fr.random_nonzero(rng)
    };
    let e = codec::encode_scalar(curve, &s);
    let back = codec::decode_scalar(curve, &e).unwrap();
    same("scalar", &s, &back, &e, &codec::encode_scalar(curve, &back))?;

    let w = random_warrant(rng);
    let back = Warrant::decode(w.encoded()).unwrap();
    same("warrant", &w, &back, w.encoded(), back.encoded())?;

    let d = Delegation {
        warrant: w.clone(),
        u: pt(rng),
        v: pt(rng),
    };
    let e = codec::encode_delegation(curve, &d);
    let back = codec::decode_delegation(curve, &e).unwrap();
    same(
        "delegation",
        &d,
        &back,
        &e,
        &codec::encode_delegation(curve, &back),
    )?;

    let c = Commitment {
        signer: random_identity(rng),
        z: pt(rng),
    };
    let e = codec::encode_commitment(curve, &c);
    let back = codec::decode_commitment(curve, &e).unwrap();
    same(
        "commitment",
        &c,
        &back,
        &e,
        &codec::encode_commitment(curve, &back),
    )?;

    let ps = PartialSignature {
        signer: random_identity(rng),
        z: pt(rng),
        x: pt(rng),
    };
    let e = codec::encode_partial(curve, &ps);
    let back = codec::decode_partial(curve, &e).unwrap();
    same(
        "partial",
        &ps,
        &back,
        &e,
        &codec::encode_partial(curve, &back),
    )?;

    let sig = MultiProxySignature {
        warrant: w,
        z: pt(rng),
        x: pt(rng),
        u: pt(rng),
    };
    let e = codec::encode_signature(curve, &sig);
    let back = codec::decode_signature(curve, &e).unwrap();
    same(
        "signature",
        &sig,
        &back,
        &e,
        &codec::encode_signature(curve, &back),
    )?;

    let k = UserKeyPair {
        identity: random_identity(rng),
        public: random_point(curve, rng),
        secret: pt(rng),
    };
    let e = codec::encode_user_key(curve, &k);
    let back = codec::decode_user_key(curve, &e).unwrap();
    same(
        "user key",
        &k,
        &back,
        &e,
        &codec::encode_user_key(curve, &back),
    )
}

fn determinism_and_codec() -> Outcome {
    let (params, master) = scheme::setup("toy", b"golden transcript").unwrap();
    let cfg = session_config(&params, 3, 42, Vec::new());
    let dir = fixtures_dir().join("toy/honest-n3");
    let text = std::fs::read_to_string(dir.join("transcript.txt")).map_err(|e| e.to_string())?;
    let expected = load_fixture("toy/honest-n3/signature.txt");
    let expected = expected.get("signature").unwrap();
    let transcript = Transcript::parse(&text).map_err(|e| e.to_string())?;
    let replayed =
        replay(full_parties(&cfg, &master).unwrap(), &transcript).map_err(|e| e.to_string())?;
    let sig_bytes = codec::encode_signature(params.curve(), &replayed.signature);
    ensure(sig_bytes == expected, || {
        "replayed signature differs from golden bytes".into()
    })?;

    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let curve = CurveParams::toy();
    for i in 0..FUZZ_CASES {
        fuzz_case(&curve, &mut rng).map_err(|e| format!("case {i}: {e}"))?;
    }
    let pinned = check_h2_fixtures()?;
    Ok(format!(
        "golden replay byte-identical ({} deliveries); {FUZZ_CASES} fuzz cases x 8 types round-trip; {pinned} pinned H2 fixtures unchanged",
        transcript.deliveries.len()
    ))
}

fn session_config(
    params: &SystemParams,
    n: usize,
    seed: u8,
    behaviors: Vec<(Identity, Behavior)>,
) -> SessionConfig {
    SessionConfig {
        session_id: [seed; 16],
        params: params.clone(),
        pkg: id("pkg"),
        warrant: pipeline::default_warrant(n, b"session").unwrap(),
        clerk: id("proxy-1"),
        now: pipeline::NOW,
        seed: [seed; 32],
        mode: SessionMode::Full,
        verifier_participates: true,
        behaviors,
    }
}

#[derive(Clone, Copy, Debug)]
enum Scenario {
    DropAll,
    DropCommitment,
    Duplicate,
    Equivocate,
    GarbagePartial,
}

fn protocol_harness(toy: &(SystemParams, MasterSecret)) -> Outcome {
    let (params, master) = toy;
    let scenarios = [
        Scenario::DropAll,
        Scenario::DropCommitment,
        Scenario::Duplicate,
        Scenario::Equivocate,
        Scenario::GarbagePartial,
    ];
    let mut tally = [0usize; 5];
    for seed in 0..FAULT_SCENARIOS {
        let n = 2 + seed as usize % 3;
        let which = seed as usize % scenarios.len();
        let scenario = scenarios[which];
        let culprit = id(&pipeline::proxy_label(
            1 + (seed as usize / scenarios.len()) % n,
        ));
        let behaviors = match scenario {
            Scenario::Equivocate => vec![(culprit.clone(), Behavior::Equivocate)],
            Scenario::GarbagePartial => vec![(culprit.clone(), Behavior::GarbagePartial)],
            _ => Vec::new(),
        };
        let plan = match scenario {
            Scenario::DropAll => {
                FaultPlan::none().with(FaultRule::from(&culprit, FaultAction::Drop))
            }
            Scenario::DropCommitment => FaultPlan::none().with(
                FaultRule::from(&culprit, FaultAction::Drop).kind(MessageKind::CommitmentBroadcast),
            ),
            Scenario::Duplicate => FaultPlan::none().with(FaultRule::all(FaultAction::Duplicate)),
            _ => FaultPlan::none(),
        };
        let cfg = session_config(params, n, seed as u8, behaviors);
        let limits = SessionLimits::default();
        let result = run_session(&cfg, master, &mut InMemoryNetwork::new(plan), limits);
        let context = || format!("seed {seed}, n={n}, {scenario:?} by {culprit}");
        match scenario {
            Scenario::Duplicate => {
                let noisy = result.map_err(|e| format!("{}: {e}", context()))?;
                let clean = run_session(
                    &cfg,
                    master,
                    &mut InMemoryNetwork::new(FaultPlan::none()),
                    limits,
                )
                .map_err(|e| format!("{}: clean run {e}", context()))?;
                ensure(noisy.signature == clean.signature, || {
                    format!("{}: signature changed", context())
                })?;
                ensure(noisy.verification == Some(Ok(Verdict::Accept)), || {
                    format!("{}: not accepted", context())
                })?;
            }
            _ => {
                let expected = match scenario {
                    Scenario::Equivocate => AbortReason::Equivocation,
                    Scenario::GarbagePartial => AbortReason::InvalidPartial,
                    _ => AbortReason::Timeout,
                };
                let err = match result {
                    Ok(_) => return Err(format!("{}: completed", context())),
                    Err(e) => e,
                };
                let report = err
                    .abort_report()
                    .ok_or_else(|| format!("{}: {err}", context()))?;
                ensure(
                    report.reason == expected && report.blamed == culprit,
                    || format!("{}: got {report}", context()),
                )?;
            }
        }
        tally[which] += 1;
    }
    Ok(format!(
        "{FAULT_SCENARIOS}/{FAULT_SCENARIOS} scenarios attributed (drop-all {}, drop-commitment {}, duplicate {} with identical σ′, equivocate {}, garbage partial {})",
        tally[0], tally[1], tally[2], tally[3], tally[4]
    ))
}
