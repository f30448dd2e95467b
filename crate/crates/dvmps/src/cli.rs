//! The `dvmps` command-line tool.
//!
//! Exit codes: 0 success, 2 cryptographic rejection, 3 policy rejection,
//! 4 I/O, configuration or usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use dvmps_core::algebra::{primes, CurveParams, GroupElement, OpCounters};
use dvmps_core::codec::{self, DecodeError};
use dvmps_core::pipeline::{self, PhaseCounts};
use dvmps_core::protocol::{AbortReason, Party, SessionConfig, SessionMode};
use dvmps_core::scheme::{
    self, Identity, MasterSecret, MultiProxySignature, PolicyViolation, SchemeError, SystemParams,
    UserKeyPair, Verdict,
};
use rand_chacha::ChaCha20Rng;
use rand_core::{OsRng, RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::config::{ConfigError, SessionFile, TransportKind, WarrantFile};
use crate::keystore::{self, Kdf, KeyRole, KeystoreError};
use crate::net::{InMemoryNetwork, LoopbackTcp, TransportError};
use crate::session::{run_parties, SessionError, SessionLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRYPTO_REJECT: i32 = 2;
pub const EXIT_POLICY_REJECT: i32 = 3;
pub const EXIT_IO_CONFIG: i32 = 4;

/// Identity standing in for the absent PKG in signing sessions.
const SIGNING_PKG: &str = "pkg";

#[derive(Debug, Parser)]
#[command(
    name = "dvmps",
    version,
    about = "Identity-based designated verifier multi-proxy signatures"
)]
pub struct Cli {
    /// Parameter set.
    #[arg(long, global = true, env = "DVMPS_PARAMS", default_value = "toy", value_parser = ["toy", "demo"])]
    pub params: String,
    /// Directory holding key files.
    #[arg(
        long,
        global = true,
        env = "DVMPS_KEYSTORE",
        default_value = "keystore"
    )]
    pub keystore: PathBuf,
    /// Hex seed for all randomness; fresh OS entropy when absent.
    #[arg(long, global = true, env = "DVMPS_SEED")]
    pub seed: Option<String>,
    #[arg(long, global = true, env = "DVMPS_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Encrypts secret key files; required to read them back.
    #[arg(long, global = true, env = "DVMPS_PASSPHRASE", hide_env_values = true)]
    pub passphrase: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create system parameters and the master secret.
    Setup,
    /// Issue key pairs for identities.
    Extract {
        #[arg(required = true)]
        identities: Vec<String>,
    },
    /// Sign a warrant as the original signer.
    Delegate {
        #[arg(long)]
        warrant: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the two-round signing session among the proxy signers.
    Sign {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a multi-proxy signature with a verifier's key.
    Verify {
        #[arg(long)]
        signature: PathBuf,
        /// Identity whose key file performs the check.
        #[arg(long = "as")]
        verifier: String,
        /// Unix time for the validity window; the current time by default.
        #[arg(long)]
        now: Option<u64>,
    },
    /// Count operations per phase for honest runs.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        n: Vec<usize>,
    },
    /// Search for a fresh supersingular parameter set.
    Paramgen {
        #[arg(long, default_value_t = 512)]
        p_bits: usize,
        #[arg(long, default_value_t = 160)]
        q_bits: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Keystore(#[from] KeystoreError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{what}: {source}")]
    Decode {
        what: &'static str,
        source: DecodeError,
    },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scheme(SchemeError::Policy(_)) => EXIT_POLICY_REJECT,
            CliError::Scheme(SchemeError::DelegationRejected | SchemeError::InvalidPartial(_)) => {
                EXIT_CRYPTO_REJECT
            }
            CliError::Session(SessionError::Aborted { report, .. }) => match report.reason {
                AbortReason::Timeout | AbortReason::Malformed | AbortReason::PhaseViolation => {
                    EXIT_IO_CONFIG
                }
                _ => EXIT_CRYPTO_REJECT,
            },
            _ => EXIT_IO_CONFIG,
        }
    }
}

/// Parses `args` and runs the command, writing to `out` and `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_IO_CONFIG;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = Context::new(cli, err)?;
    match &cli.command {
        Command::Setup => ctx.setup(out),
        Command::Extract { identities } => ctx.extract(identities, out),
        Command::Delegate { warrant, out: path } => ctx.delegate(warrant, path, out),
        Command::Sign { session, out: path } => ctx.sign(session, path, out),
        Command::Verify {
            signature,
            verifier,
            now,
        } => ctx.verify(signature, verifier, *now, out),
        Command::Bench { n } => ctx.bench(n, cli.format, out),
        Command::Paramgen { p_bits, q_bits } => ctx.paramgen(*p_bits, *q_bits, cli.format, out),
    }
}

struct Context<'a> {
    cli: &'a Cli,
    seed: Vec<u8>,
}

impl<'a> Context<'a> {
    fn new(cli: &'a Cli, err: &mut dyn Write) -> Result<Self, CliError> {
        let seed = match &cli.seed {
            Some(h) => {
                hex::decode(h.trim()).map_err(|_| CliError::Usage("--seed must be hex".into()))?
            }
            None => {
                let mut s = vec![0u8; 32];
                OsRng.fill_bytes(&mut s);
                let _ = writeln!(err, "seed: {}", hex::encode(&s));
                s
            }
        };
        if seed.is_empty() {
            return Err(CliError::Usage("--seed must not be empty".into()));
        }
        Ok(Self { cli, seed })
    }

    fn param_set(&self) -> &str {
        &self.cli.params
    }

    fn pass(&self) -> Option<&str> {
        self.cli.passphrase.as_deref()
    }

    /// Per-purpose RNG so commands sharing a seed draw independent streams.
    fn rng(&self, purpose: &str) -> ChaCha20Rng {
        ChaCha20Rng::from_seed(self.derive(purpose))
    }

    fn derive(&self, purpose: &str) -> [u8; 32] {
        Sha256::new()
            .chain_update((purpose.len() as u32).to_be_bytes())
            .chain_update(purpose)
            .chain_update(&self.seed)
            .finalize()
            .into()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cli.keystore.join(name)
    }

    fn user_path(&self, id: &Identity) -> PathBuf {
        let safe = id
            .as_str()
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "._-".contains(c))
            && !id.as_str().starts_with('.');
        let stem = if safe {
            id.as_str().to_string()
        } else {
            format!("x{}", hex::encode(id.as_bytes()))
        };
        self.cli.keystore.join("users").join(format!("{stem}.key"))
    }

    fn params(&self) -> Result<SystemParams, CliError> {
        let curve = CurveParams::by_name(self.param_set()).map_err(SchemeError::from)?;
        let bytes = keystore::load(
            &self.path("params.key"),
            self.param_set(),
            KeyRole::Params,
            None,
        )?;
        let p_pub = codec::decode_point(&curve, &bytes).map_err(|source| CliError::Decode {
            what: "params",
            source,
        })?;
        Ok(SystemParams::from_public(curve, p_pub)?)
    }

    fn user_key(&self, params: &SystemParams, id: &Identity) -> Result<UserKeyPair, CliError> {
        let bytes = keystore::load(
            &self.user_path(id),
            self.param_set(),
            KeyRole::User,
            self.pass(),
        )?;
        let key =
            codec::decode_user_key(params.curve(), &bytes).map_err(|source| CliError::Decode {
                what: "user key",
                source,
            })?;
        if &key.identity != id {
            return Err(CliError::Usage(format!(
                "key file for {id} holds {}",
                key.identity
            )));
        }
        Ok(key)
    }

    fn setup(&self, out: &mut dyn Write) -> Result<i32, CliError> {
        let (params, master) = scheme::setup(self.param_set(), &self.seed)?;
        let users = self.cli.keystore.join("users");
        fs::create_dir_all(&users).map_err(|source| CliError::Io {
            path: users,
            source,
        })?;
        let curve = params.curve();
        let set = self.param_set();
        let mut rng = self.rng("keystore-setup");
        keystore::save(
            &self.path("params.key"),
            set,
            KeyRole::Params,
            &curve.encode_point(params.p_pub()),
            None,
            Kdf::default(),
            &mut rng,
        )?;
        let master_bytes = codec::encode_scalar(curve, master.scalar());
        keystore::save(
            &self.path("master.key"),
            set,
            KeyRole::Master,
            &master_bytes,
            self.pass(),
            Kdf::default(),
            &mut rng,
        )?;
        writeln_out(out, format_args!("parameter set {set}"))?;
        writeln_out(
            out,
            format_args!("P_pub {}", hex::encode(curve.encode_point(params.p_pub()))),
        )?;
        Ok(EXIT_OK)
    }

    fn extract(&self, identities: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
        let params = self.params()?;
        let bytes = keystore::load(
            &self.path("master.key"),
            self.param_set(),
            KeyRole::Master,
            self.pass(),
        )?;
        let s =
            codec::decode_scalar(params.curve(), &bytes).map_err(|source| CliError::Decode {
                what: "master key",
                source,
            })?;
        let master = MasterSecret::from_scalar(s)?;
        if params
            .curve()
            .scalar_mul(master.scalar(), params.generator(), &mut OpCounters::new())
            != *params.p_pub()
        {
            return Err(CliError::Usage(
                "master key does not match params.key".into(),
            ));
        }
        let mut rng = self.rng("keystore-extract");
        for label in identities {
            let id = Identity::new(label.clone())?;
            let key = scheme::extract_key(&params, &master, &id, &mut OpCounters::new())?;
            let path = self.user_path(&id);
            let material = codec::encode_user_key(params.curve(), &key);
            keystore::save(
                &path,
                self.param_set(),
                KeyRole::User,
                &material,
                self.pass(),
                Kdf::default(),
                &mut rng,
            )?;
            writeln_out(out, format_args!("{id} -> {}", path.display()))?;
        }
        Ok(EXIT_OK)
    }

    fn delegate(
        &self,
        warrant_path: &Path,
        out_path: &Path,
        out: &mut dyn Write,
    ) -> Result<i32, CliError> {
        let params = self.params()?;
        let warrant = WarrantFile::load(warrant_path)?.to_warrant()?;
        let original = self.user_key(&params, warrant.original_signer())?;
        let q_c = params.public_key(warrant.designated_verifier(), &mut OpCounters::new())?;
        let mut rng = self.rng("delegate");
        let d = scheme::delegate(
            &params,
            &original,
            &q_c,
            warrant,
            &mut rng,
            &mut OpCounters::new(),
        )?;
        write_file(out_path, &codec::encode_delegation(params.curve(), &d))?;
        writeln_out(
            out,
            format_args!(
                "delegation for {} signer(s) -> {}",
                d.warrant.signer_count(),
                out_path.display()
            ),
        )?;
        Ok(EXIT_OK)
    }

    fn sign(
        &self,
        session_path: &Path,
        out_path: &Path,
        out: &mut dyn Write,
    ) -> Result<i32, CliError> {
        let params = self.params()?;
        let file = SessionFile::load(session_path)?;
        let bytes = read_file(&file.delegation)?;
        let delegation = codec::decode_delegation(params.curve(), &bytes).map_err(|source| {
            CliError::Decode {
                what: "delegation",
                source,
            }
        })?;
        let warrant = delegation.warrant.clone();
        let session_id = match file.session_id()? {
            Some(id) => id,
            None => self.derive("session-id")[..16]
                .try_into()
                .expect("16 bytes"),
        };
        let cfg = SessionConfig {
            session_id,
            params: params.clone(),
            pkg: Identity::new(SIGNING_PKG)?,
            clerk: Identity::new(file.clerk.clone())?,
            now: warrant.not_before(),
            seed: self.derive("sign"),
            mode: SessionMode::Preloaded,
            verifier_participates: false,
            behaviors: Vec::new(),
            warrant,
        };
        let mut parties = Vec::new();
        for id in cfg.warrant.proxy_signers() {
            let key = self.user_key(&params, id)?;
            parties.push(
                Party::preloaded_signer(&cfg, key, delegation.clone())
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            );
        }
        let limits = SessionLimits::default();
        let outcome = match file.transport {
            TransportKind::Memory => run_parties(parties, &mut InMemoryNetwork::default(), limits)?,
            TransportKind::Tcp => {
                let mut tcp = LoopbackTcp::bind(cfg.warrant.proxy_signers())?;
                run_parties(
                    parties,
                    &mut tcp,
                    SessionLimits {
                        idle_timeout: 2_000,
                        ..limits
                    },
                )?
            }
        };
        write_file(
            out_path,
            &codec::encode_signature(params.curve(), &outcome.signature),
        )?;
        writeln_out(
            out,
            format_args!(
                "signature by {} proxy signer(s) -> {}",
                cfg.warrant.signer_count(),
                out_path.display()
            ),
        )?;
        Ok(EXIT_OK)
    }

    fn verify(
        &self,
        sig_path: &Path,
        verifier: &str,
        now: Option<u64>,
        out: &mut dyn Write,
    ) -> Result<i32, CliError> {
        let params = self.params()?;
        let bytes = read_file(sig_path)?;
        let holder = self.user_key(&params, &Identity::new(verifier)?)?;
        let sig = match codec::decode_signature(params.curve(), &bytes) {
            Ok(sig) => sig,
            Err(e) => {
                writeln_out(
                    out,
                    format_args!("REJECT (cryptographic): malformed signature: {e}"),
                )?;
                return Ok(EXIT_CRYPTO_REJECT);
            }
        };
        let now = now.unwrap_or_else(unix_now);
        let w = &sig.warrant;
        let window = if now < w.not_before() {
            Some(PolicyViolation::NotYetValid {
                now,
                not_before: w.not_before(),
            })
        } else if now > w.not_after() {
            Some(PolicyViolation::Expired {
                now,
                not_after: w.not_after(),
            })
        } else {
            None
        };
        if let Some(v) = window {
            writeln_out(out, format_args!("REJECT (policy): {v}"))?;
            return Ok(EXIT_POLICY_REJECT);
        }
        if &holder.identity != w.designated_verifier() {
            writeln_out(
                out,
                format_args!(
                    "note: {} is not the designated verifier {}",
                    holder.identity,
                    w.designated_verifier()
                ),
            )?;
        }
        match check_with_key(&params, &sig, &holder)? {
            Verdict::Accept => {
                writeln_out(out, format_args!("ACCEPT"))?;
                Ok(EXIT_OK)
            }
            Verdict::Reject => {
                writeln_out(
                    out,
                    format_args!("REJECT (cryptographic): verification equation does not hold"),
                )?;
                Ok(EXIT_CRYPTO_REJECT)
            }
        }
    }

    fn bench(&self, ns: &[usize], format: Format, out: &mut dyn Write) -> Result<i32, CliError> {
        if ns.is_empty() || ns.contains(&0) {
            return Err(CliError::Usage("--n takes positive signer counts".into()));
        }
        let (params, master) = scheme::setup(self.param_set(), &self.seed)?;
        let mut rng = self.rng("bench");
        let mut failed = false;
        if format == Format::Csv {
            writeln_out(out, format_args!("n,phase,H,M,E,P,I"))?;
        }
        for &n in ns {
            let run = pipeline::run_honest(&params, &master, n, b"benchmark message", &mut rng)?;
            if run.verdict != Verdict::Accept {
                return Err(CliError::Usage(format!(
                    "honest run with n={n} did not verify"
                )));
            }
            let report = BenchReport::new(n, &run.phases);
            failed |= report.failed();
            match format {
                Format::Text => report.write_text(out)?,
                Format::Csv => report.write_csv(out)?,
            }
        }
        Ok(if failed { EXIT_CRYPTO_REJECT } else { EXIT_OK })
    }

    fn paramgen(
        &self,
        p_bits: usize,
        q_bits: usize,
        format: Format,
        out: &mut dyn Write,
    ) -> Result<i32, CliError> {
        if !(16..=512).contains(&p_bits) || q_bits < 8 || q_bits + 4 > p_bits {
            return Err(CliError::Usage(
                "need 16 <= p-bits <= 512 and 8 <= q-bits <= p-bits - 4".into(),
            ));
        }
        let g = primes::generate_supersingular_params(&mut self.rng("paramgen"), p_bits, q_bits);
        let curve = CurveParams::new("generated", g.p, g.q).map_err(SchemeError::from)?;
        let (p, q, c) = (curve.p(), curve.q(), curve.cofactor());
        match format {
            Format::Text => {
                writeln_out(out, format_args!("p = {p:x}"))?;
                writeln_out(out, format_args!("q = {q:x}"))?;
                writeln_out(out, format_args!("cofactor = {c:x}"))?;
            }
            Format::Csv => {
                writeln_out(out, format_args!("p,q,cofactor"))?;
                writeln_out(out, format_args!("{p:x},{q:x},{c:x}"))?;
            }
        }
        Ok(EXIT_OK)
    }
}

/// Evaluates the verification equation with `holder`'s secret key against
/// the public key of the warrant's designated verifier.
pub fn check_with_key(
    params: &SystemParams,
    sig: &MultiProxySignature,
    holder: &UserKeyPair,
) -> Result<Verdict, CliError> {
    let ops = &mut OpCounters::new();
    let w = &sig.warrant;
    let q_c = params.public_key(w.designated_verifier(), ops)?;
    let q_a = params.public_key(w.original_signer(), ops)?;
    let pubs = w
        .proxy_signers()
        .iter()
        .map(|id| params.public_key(id, ops))
        .collect::<Result<Vec<GroupElement>, _>>()?;
    Ok(scheme::check_mps_equation(
        params,
        sig,
        &q_c,
        &holder.secret,
        &q_a,
        &pubs,
        ops,
    )?)
}

/// One block of bench output, compared against the published tallies.
#[derive(Clone, Debug)]
pub struct BenchReport {
    pub n: usize,
    pub phases: PhaseCounts,
}

const PHASE_NAMES: [&str; 3] = ["proxy-keygen", "generation", "verification"];

impl BenchReport {
    pub fn new(n: usize, phases: &PhaseCounts) -> Self {
        Self { n, phases: *phases }
    }

    /// P or E differ from the reference; only meaningful for n = 1.
    pub fn failed(&self) -> bool {
        if self.n != 1 {
            return false;
        }
        let measured = self.phases.as_array();
        let per_phase = measured
            .iter()
            .zip(pipeline::REFERENCE_PHASES)
            .any(|(m, r)| m.pairings != r.pairings || m.exponentiations != r.exponentiations);
        let t = self.phases.total();
        let r = pipeline::REFERENCE_TOTAL;
        per_phase || t.pairings != r.pairings || t.exponentiations != r.exponentiations
    }

    fn write_text(&self, out: &mut dyn Write) -> Result<(), CliError> {
        writeln_out(out, format_args!("n = {}", self.n))?;
        writeln_out(
            out,
            format_args!(
                "  {:<14}{:>4}{:>4}{:>4}{:>4}{:>4}",
                "phase", "H", "M", "E", "P", "I"
            ),
        )?;
        for (name, c) in PHASE_NAMES.iter().zip(self.phases.as_array()) {
            row_text(out, name, &c, None)?;
        }
        let total = self.phases.total();
        row_text(out, "total", &total, Some(total.to_string()))?;
        if self.n != 1 {
            return Ok(());
        }
        let r = pipeline::REFERENCE_TOTAL;
        row_text(out, "reference", &r, Some(r.to_string()))?;
        let cmp = |name: &str, m: u64, r: u64, hard: bool| -> String {
            let d = m as i64 - r as i64;
            match (d, hard) {
                (0, _) => format!("{name} ok"),
                (_, true) => format!("{name} FAIL({d:+})"),
                (_, false) => format!("{name} WARN({d:+})"),
            }
        };
        writeln_out(
            out,
            format_args!(
                "  check: {}, {}, {}, {}",
                cmp("H", total.hashes, r.hashes, false),
                cmp("M", total.scalar_mults, r.scalar_mults, false),
                cmp("E", total.exponentiations, r.exponentiations, true),
                cmp("P", total.pairings, r.pairings, true),
            ),
        )?;
        for (name, (m, r)) in PHASE_NAMES.iter().zip(
            self.phases
                .as_array()
                .iter()
                .zip(pipeline::REFERENCE_PHASES),
        ) {
            let ok = m.pairings == r.pairings && m.exponentiations == r.exponentiations;
            writeln_out(
                out,
                format_args!(
                    "  {name}: P {}/{} E {}/{} {}",
                    m.pairings,
                    r.pairings,
                    m.exponentiations,
                    r.exponentiations,
                    if ok { "ok" } else { "FAIL" }
                ),
            )?;
        }
        writeln_out(
            out,
            format_args!(
                "  comparison scheme (display only): {}",
                pipeline::COMPARISON_TOTAL
            ),
        )?;
        writeln_out(
            out,
            format_args!(
                "  note: the reference lists I=1 for generation; no inversion occurs in any step. \
                 H and M depend on the counting convention: one H per hash call, one M per scalar multiplication."
            ),
        )?;
        writeln_out(
            out,
            format_args!("  result: {}", if self.failed() { "FAIL" } else { "PASS" }),
        )
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let n = self.n;
        let mut rows: Vec<(&str, OpCounters)> = PHASE_NAMES
            .iter()
            .copied()
            .zip(self.phases.as_array())
            .collect();
        rows.push(("total", self.phases.total()));
        if n == 1 {
            for (name, r) in PHASE_NAMES.iter().zip(pipeline::REFERENCE_PHASES) {
                rows.push((name, r));
            }
            rows.push(("reference-total", pipeline::REFERENCE_TOTAL));
            rows.push(("comparison-total", pipeline::COMPARISON_TOTAL));
        }
        for (i, (name, c)) in rows.iter().enumerate() {
            let label = if n == 1 && (4..7).contains(&i) {
                format!("reference-{name}")
            } else {
                name.to_string()
            };
            writeln_out(
                out,
                format_args!(
                    "{n},{label},{},{},{},{},{}",
                    c.hashes, c.scalar_mults, c.exponentiations, c.pairings, c.inversions
                ),
            )?;
        }
        Ok(())
    }
}

fn row_text(
    out: &mut dyn Write,
    name: &str,
    c: &OpCounters,
    tail: Option<String>,
) -> Result<(), CliError> {
    writeln_out(
        out,
        format_args!(
            "  {:<14}{:>4}{:>4}{:>4}{:>4}{:>4}{}",
            name,
            c.hashes,
            c.scalar_mults,
            c.exponentiations,
            c.pairings,
            c.inversions,
            tail.map(|t| format!("   {t}")).unwrap_or_default()
        ),
    )
}

fn writeln_out(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    writeln!(out, "{args}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
