use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::DecodeError;

/// Named byte strings in a line-oriented `name=hex` text form. Blank
/// lines and lines starting with `#` are skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fixture {
    entries: BTreeMap<String, Vec<u8>>,
}

impl Fixture {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<Vec<u8>>) {
        self.entries.insert(name.into(), value.into());
    }

    pub fn get(&self, name: &str) -> Result<&[u8], DecodeError> {
        self.entries
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| DecodeError::MissingEntry(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_fixture(text: &str) -> Result<Fixture, DecodeError> {
    let mut fixture = Fixture::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || DecodeError::FixtureSyntax(idx + 1);
        let (name, hex) = line.split_once('=').ok_or_else(bad)?;
        let name = name.trim();
        if name.is_empty() || fixture.entries.contains_key(name) {
            return Err(bad());
        }
        fixture.insert(name, decode_hex(hex.trim()).ok_or_else(bad)?);
    }
    Ok(fixture)
}

pub fn render_fixture(fixture: &Fixture) -> String {
    let mut out = String::new();
    for (name, value) in &fixture.entries {
        out.push_str(name);
        out.push('=');
        for b in value {
            write!(out, "{b:02x}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

fn decode_hex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) {
        return None;
    }
    let nibble = |c: u8| (c as char).to_digit(16).map(|d| d as u8);
    s.as_bytes()
        .chunks(2)
        .map(|pair| Some(nibble(pair[0])? << 4 | nibble(pair[1])?))
        .collect()
}
