//! Mapping between individual names and store IRIs.
//!
//! An individual named `Rain->Wet` lives at `cgs:Rain-%3EWet`: every byte
//! outside the unreserved set `A-Z a-z 0-9 - . _ ~` is percent-encoded, so
//! the mapping is a bijection on non-empty strings.

use std::fmt::Write as _;

use crate::rdf::vocab::cgs;
use crate::rdf::Iri;

pub fn encode_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for b in name.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

pub fn decode_name(encoded: &str) -> Option<String> {
    let bytes = encoded.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = encoded.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Store IRI of an individual. Panics on an empty name; callers validate
/// names first.
pub fn individual_iri(name: &str) -> Iri {
    assert!(!name.is_empty(), "individual names are non-empty");
    Iri::new(format!("{}{}", cgs::NS, encode_name(name))).expect("encoded names form valid IRIs")
}

/// Inverse of [`individual_iri`]; `None` for IRIs outside the store
/// namespace or not in canonical encoding.
pub fn individual_name(iri: &Iri) -> Option<String> {
    let local = iri.as_str().strip_prefix(cgs::NS)?;
    let name = decode_name(local)?;
    (!name.is_empty() && encode_name(&name) == local).then_some(name)
}
