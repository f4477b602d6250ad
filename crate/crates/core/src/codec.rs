//! Signal files (JSON or little-endian binary) and sparse-collection JSON.
//!
//! Binary signal layout: `i64` offset, `u64` length, then `length` `f64`
//! samples, all little-endian, with no trailing bytes.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ops::{Signal, MAX_SUPPORT};
use crate::sparse::{SparseCollection, SparseInterval};

const HEADER: usize = 16;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignal {
    offset: i64,
    samples: Vec<f64>,
}

fn decode_err(e: impl std::fmt::Display) -> Error {
    Error::Decode(e.to_string())
}

pub fn decode_signal_json(bytes: &[u8]) -> Result<Signal> {
    let raw: RawSignal = serde_json::from_slice(bytes).map_err(decode_err)?;
    Signal::new(raw.offset, raw.samples).map_err(decode_err)
}

pub fn encode_signal_json(f: &Signal) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(f)?)
}

pub fn decode_signal_binary(bytes: &[u8]) -> Result<Signal> {
    if bytes.len() < HEADER {
        return Err(Error::Decode(format!(
            "binary signal needs a {HEADER}-byte header, got {} bytes",
            bytes.len()
        )));
    }
    let offset = i64::from_le_bytes(bytes[..8].try_into().expect("8 bytes"));
    let len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
    let body = &bytes[HEADER..];
    if len > MAX_SUPPORT as u64 || body.len() as u64 != len * 8 {
        return Err(Error::Decode(format!(
            "declared length {len} does not match {} payload bytes",
            body.len()
        )));
    }
    let samples = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Signal::new(offset, samples).map_err(decode_err)
}

pub fn encode_signal_binary(f: &Signal) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 8 * f.len());
    out.extend_from_slice(&f.offset.to_le_bytes());
    out.extend_from_slice(&(f.len() as u64).to_le_bytes());
    for v in &f.samples {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    a: i64,
    b: i64,
    witness: Vec<i64>,
}

/// `[{a, b, witness: [ints]}, ...]`; the witness conditions are re-audited.
pub fn decode_sparse_collection_json(bytes: &[u8]) -> Result<SparseCollection> {
    let raw: Vec<RawInterval> = serde_json::from_slice(bytes).map_err(decode_err)?;
    let items = raw
        .into_iter()
        .map(|r| SparseInterval {
            a: r.a,
            b: r.b,
            witness: r.witness,
        })
        .collect();
    SparseCollection::new(items).map_err(decode_err)
}

pub fn encode_sparse_collection_json(c: &SparseCollection) -> Result<Vec<u8>> {
    Ok(serde_json::to_vec(c)?)
}

/// Reads a signal file; `.bin` selects the binary layout, anything else JSON.
pub fn read_signal(path: &std::path::Path) -> Result<Signal> {
    let bytes = std::fs::read(path)?;
    if path.extension().is_some_and(|e| e == "bin") {
        decode_signal_binary(&bytes)
    } else {
        decode_signal_json(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f = Signal::new(-3, vec![1.0, 0.0, 0.5]).unwrap();
        let bytes = encode_signal_json(&f).unwrap();
        assert_eq!(decode_signal_json(&bytes).unwrap(), f);
        assert_eq!(
            decode_signal_json(br#"{"offset": 2, "samples": [1, 2]}"#).unwrap(),
            Signal::new(2, vec![1.0, 2.0]).unwrap()
        );
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            &br#"{"offset": 0}"#[..],
            br#"{"offset": 0, "samples": [1], "x": 1}"#,
            br#"{"offset": 1.5, "samples": []}"#,
            br#"{"offset": 9223372036854775807, "samples": [1, 2]}"#,
            br#"[]"#,
            b"",
        ] {
            assert!(matches!(decode_signal_json(bad), Err(Error::Decode(_))));
        }
    }

    #[test]
    fn binary_round_trip_and_rejects() {
        let f = Signal::new(i64::MIN, vec![-1.25, 3.0]).unwrap();
        let bytes = encode_signal_binary(&f);
        assert_eq!(bytes.len(), 32);
        assert_eq!(decode_signal_binary(&bytes).unwrap(), f);
        assert!(decode_signal_binary(&bytes[..31]).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(decode_signal_binary(&long).is_err());
        let mut nan = bytes.clone();
        nan[16..24].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(decode_signal_binary(&nan).is_err());
        let mut huge = bytes;
        huge[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(decode_signal_binary(&huge).is_err());
    }

    #[test]
    fn collection_round_trip() {
        let json = br#"[{"a": 0, "b": 7, "witness": [0, 1, 2, 3, 6, 7]}, {"a": 4, "b": 5, "witness": [4, 5]}]"#;
        let c = decode_sparse_collection_json(json).unwrap();
        assert_eq!(c.len(), 2);
        let again = encode_sparse_collection_json(&c).unwrap();
        assert_eq!(decode_sparse_collection_json(&again).unwrap(), c);
        assert!(decode_sparse_collection_json(br#"[{"a": 0, "b": 7, "witness": [0]}]"#).is_err());
        assert!(decode_sparse_collection_json(br#"[{"a": 3, "b": 1, "witness": []}]"#).is_err());
    }
}
