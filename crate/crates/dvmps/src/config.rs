//! TOML inputs for the command-line tool.

use std::fs;
use std::path::{Path, PathBuf};

use dvmps_core::scheme::{Identity, SchemeError, Warrant, WarrantTerms};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// A warrant as written by hand. Exactly one of `message`, `message_file`
/// and `message_digest` names the delegated message.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarrantFile {
    pub original_signer: String,
    pub proxy_signers: Vec<String>,
    pub designated_verifier: String,
    pub message: Option<String>,
    pub message_file: Option<PathBuf>,
    /// Hex SHA-256 of the message.
    pub message_digest: Option<String>,
    pub not_before: u64,
    pub not_after: u64,
    #[serde(default)]
    pub policy: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransportKind {
    #[default]
    Memory,
    Tcp,
}

/// Inputs of a signing session among proxy signers.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    /// Delegation produced by `dvmps delegate`, relative to this file.
    pub delegation: PathBuf,
    pub clerk: String,
    #[serde(default)]
    pub transport: TransportKind,
    /// 16 bytes of hex; derived from the seed when absent.
    pub session_id: Option<String>,
}

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.into(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| ConfigError::Toml {
        path: path.into(),
        source,
    })
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

impl WarrantFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let mut file: Self = read_toml(path)?;
        if let Some(rel) = file.message_file.take() {
            file.message_file = Some(base_dir(path).join(rel));
        }
        Ok(file)
    }

    pub fn to_warrant(&self) -> Result<Warrant, ConfigError> {
        let digest = match (&self.message, &self.message_file, &self.message_digest) {
            (Some(m), None, None) => WarrantTerms::digest_message(m.as_bytes()),
            (None, Some(path), None) => {
                let bytes = fs::read(path).map_err(|source| ConfigError::Io {
                    path: path.clone(),
                    source,
                })?;
                WarrantTerms::digest_message(&bytes)
            }
            (None, None, Some(hex_digest)) => hex::decode(hex_digest)
                .ok()
                .and_then(|v| <[u8; 32]>::try_from(v).ok())
                .ok_or_else(|| {
                    ConfigError::Invalid("message_digest must be 32 bytes of hex".into())
                })?,
            _ => {
                return Err(ConfigError::Invalid(
                    "give exactly one of message, message_file, message_digest".into(),
                ))
            }
        };
        Ok(Warrant::new(WarrantTerms {
            original_signer: Identity::new(self.original_signer.clone())?,
            proxy_signers: self
                .proxy_signers
                .iter()
                .map(|s| Identity::new(s.clone()))
                .collect::<Result<_, _>>()?,
            designated_verifier: Identity::new(self.designated_verifier.clone())?,
            message_digest: digest,
            not_before: self.not_before,
            not_after: self.not_after,
            policy: self.policy.as_bytes().to_vec(),
        })?)
    }
}

impl SessionFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let mut file: Self = read_toml(path)?;
        file.delegation = base_dir(path).join(&file.delegation);
        Ok(file)
    }

    pub fn session_id(&self) -> Result<Option<[u8; 16]>, ConfigError> {
        self.session_id
            .as_ref()
            .map(|h| {
                hex::decode(h)
                    .ok()
                    .and_then(|v| <[u8; 16]>::try_from(v).ok())
                    .ok_or_else(|| {
                        ConfigError::Invalid("session_id must be 16 bytes of hex".into())
                    })
            })
            .transpose()
    }
}
