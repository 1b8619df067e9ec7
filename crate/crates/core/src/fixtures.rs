//! Reference values shipped with the crate, looked up by key.
//!
//! See `fixtures/README.md` for the file format.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};

const SOURCES: [(&str, &str); 4] = [
    ("presentations.txt", include_str!("../fixtures/presentations.txt")),
    ("exterior.txt", include_str!("../fixtures/exterior.txt")),
    ("spin.txt", include_str!("../fixtures/spin.txt")),
    ("adjoint.txt", include_str!("../fixtures/adjoint.txt")),
];

fn table() -> &'static BTreeMap<String, String> {
    static TABLE: OnceLock<BTreeMap<String, String>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = BTreeMap::new();
        for (file, text) in SOURCES {
            for (key, body) in parse_sections(text) {
                let prev = out.insert(key.clone(), body);
                assert!(prev.is_none(), "duplicate fixture key {key} in {file}");
            }
        }
        out
    })
}

/// Splits `[key]` sections. A body runs until the next blank line.
pub fn parse_sections(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut current: Option<(String, Vec<&str>)> = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(key) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if let Some((k, body)) = current.take() {
                out.push((k, body.join(" ")));
            }
            current = Some((key.to_string(), Vec::new()));
        } else if line.is_empty() {
            if let Some((k, body)) = current.take() {
                out.push((k, body.join(" ")));
            }
        } else if let Some((_, body)) = current.as_mut() {
            body.push(line);
        }
    }
    if let Some((k, body)) = current {
        out.push((k, body.join(" ")));
    }
    out
}

/// Raw text of a fixture.
pub fn text(key: &str) -> Result<&'static str> {
    table()
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Unsupported(format!("no reference value named {key}")))
}

pub fn has(key: &str) -> bool {
    table().contains_key(key)
}

pub fn keys() -> impl Iterator<Item = &'static str> {
    table().keys().map(String::as_str)
}

/// A fixture parsed as a polynomial of `ring`.
pub fn polynomial(ring: &Arc<Ring>, key: &str) -> Result<Polynomial> {
    Polynomial::parse(ring, text(key)?)
}

/// A comma separated fixture parsed element by element.
pub fn polynomial_list(ring: &Arc<Ring>, key: &str) -> Result<Vec<Polynomial>> {
    text(key)?
        .split(',')
        .map(|s| Polynomial::parse(ring, s.trim()))
        .collect()
}

/// A comma separated list of names.
pub fn names(key: &str) -> Result<Vec<&'static str>> {
    Ok(text(key)?.split(',').map(str::trim).collect())
}
