//! Key files.
//!
//! ```text
//! "DVMPS1" ‖ len ‖ param-set name ‖ role tag ‖ len ‖ kdf name
//!          ‖ iterations (u32) ‖ salt (16) ‖ nonce (12) ‖ len ‖ body
//! ```
//!
//! With kdf `pbkdf2-sha256` the body is ChaCha20-Poly1305 ciphertext under a
//! key derived from the passphrase, authenticated together with the whole
//! header. With kdf `none` the body is the plain codec encoding.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chacha20poly1305::aead::{Aead, KeyInit, Payload};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};
use dvmps_core::codec::{DecodeError, Reader, Writer};
use rand_core::RngCore;
use sha2::Sha256;

pub const MAGIC: &[u8; 6] = b"DVMPS1";
pub const KDF_NONE: &str = "none";
pub const KDF_PBKDF2: &str = "pbkdf2-sha256";
pub const DEFAULT_ITERATIONS: u32 = 100_000;

#[derive(Debug, thiserror::Error)]
pub enum KeystoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("not a key file (bad magic)")]
    BadMagic,
    #[error("key file is for parameter set {found}, expected {expected}")]
    ParamMismatch { expected: String, found: String },
    #[error("key file holds {found:?}, expected {expected:?}")]
    RoleMismatch { expected: KeyRole, found: KeyRole },
    #[error("wrong passphrase or corrupted key file")]
    WrongPassphrase,
    #[error("key file is encrypted; a passphrase is required")]
    PassphraseRequired,
    #[error("unsupported key derivation {0}")]
    UnsupportedKdf(String),
    #[error("corrupt key file: {0}")]
    Decode(#[from] DecodeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum KeyRole {
    /// Public system parameters.
    Params = 1,
    /// The PKG master secret.
    Master = 2,
    /// One user's extracted key pair.
    User = 3,
}

impl KeyRole {
    fn from_u8(v: u8) -> Option<Self> {
        [KeyRole::Params, KeyRole::Master, KeyRole::User]
            .into_iter()
            .find(|r| *r as u8 == v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kdf {
    pub iterations: u32,
}

impl Default for Kdf {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
        }
    }
}

/// Serializes `material`, encrypting when a passphrase is given. Salt and
/// nonce come from `rng`.
pub fn seal(
    param_set: &str,
    role: KeyRole,
    material: &[u8],
    passphrase: Option<&str>,
    kdf: Kdf,
    rng: &mut dyn RngCore,
) -> Vec<u8> {
    let mut salt = [0u8; 16];
    let mut nonce = [0u8; 12];
    let (kdf_name, iterations) = match passphrase {
        Some(_) => {
            rng.fill_bytes(&mut salt);
            rng.fill_bytes(&mut nonce);
            (KDF_PBKDF2, kdf.iterations)
        }
        None => (KDF_NONE, 0),
    };
    let mut w = Writer::new();
    w.put_raw(MAGIC)
        .put_bytes(param_set.as_bytes())
        .put_u8(role as u8)
        .put_bytes(kdf_name.as_bytes())
        .put_u32(iterations)
        .put_raw(&salt)
        .put_raw(&nonce);
    let header = w.clone().into_bytes();
    let body = match passphrase {
        Some(pass) => cipher(pass, &salt, iterations)
            .encrypt(
                Nonce::from_slice(&nonce),
                Payload {
                    msg: material,
                    aad: &header,
                },
            )
            .expect("in-memory encryption cannot fail"),
        None => material.to_vec(),
    };
    w.put_bytes(&body);
    w.into_bytes()
}

/// Checks magic, parameter set and role, then decrypts if needed.
pub fn open(
    bytes: &[u8],
    param_set: &str,
    role: KeyRole,
    passphrase: Option<&str>,
) -> Result<Vec<u8>, KeystoreError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(KeystoreError::BadMagic);
    }
    let mut r = Reader::new(&bytes[MAGIC.len()..]);
    let found_set = String::from_utf8_lossy(r.get_bytes()?).into_owned();
    let role_byte = r.get_u8()?;
    let found_role = KeyRole::from_u8(role_byte).ok_or(DecodeError::InvalidValue("key role"))?;
    let kdf_name = String::from_utf8_lossy(r.get_bytes()?).into_owned();
    let iterations = r.get_u32()?;
    let salt: [u8; 16] = r.get_array()?;
    let nonce: [u8; 12] = r.get_array()?;
    let header_len = bytes.len() - r.remaining();
    let body = r.get_bytes()?;
    r.finish()?;

    if found_set != param_set {
        return Err(KeystoreError::ParamMismatch {
            expected: param_set.into(),
            found: found_set,
        });
    }
    if found_role != role {
        return Err(KeystoreError::RoleMismatch {
            expected: role,
            found: found_role,
        });
    }
    match kdf_name.as_str() {
        KDF_NONE => Ok(body.to_vec()),
        KDF_PBKDF2 => {
            let pass = passphrase.ok_or(KeystoreError::PassphraseRequired)?;
            cipher(pass, &salt, iterations)
                .decrypt(
                    Nonce::from_slice(&nonce),
                    Payload {
                        msg: body,
                        aad: &bytes[..header_len],
                    },
                )
                .map_err(|_| KeystoreError::WrongPassphrase)
        }
        other => Err(KeystoreError::UnsupportedKdf(other.into())),
    }
}

fn cipher(passphrase: &str, salt: &[u8; 16], iterations: u32) -> ChaCha20Poly1305 {
    let mut key = [0u8; 32];
    pbkdf2::pbkdf2_hmac::<Sha256>(passphrase.as_bytes(), salt, iterations, &mut key);
    ChaCha20Poly1305::new(Key::from_slice(&key))
}

pub fn save(
    path: &Path,
    param_set: &str,
    role: KeyRole,
    material: &[u8],
    passphrase: Option<&str>,
    kdf: Kdf,
    rng: &mut dyn RngCore,
) -> Result<(), KeystoreError> {
    let bytes = seal(param_set, role, material, passphrase, kdf, rng);
    fs::write(path, bytes).map_err(|source| KeystoreError::Io {
        path: path.into(),
        source,
    })
}

pub fn load(
    path: &Path,
    param_set: &str,
    role: KeyRole,
    passphrase: Option<&str>,
) -> Result<Vec<u8>, KeystoreError> {
    let bytes = fs::read(path).map_err(|source| KeystoreError::Io {
        path: path.into(),
        source,
    })?;
    open(&bytes, param_set, role, passphrase)
}
