//! Replays the checked-in fuzz corpus through the decoders. Each seed either
//! decodes and round-trips, or is rejected with a decode error.

use std::path::PathBuf;

use sqlab_core::codec::{
    decode_signal_binary, decode_signal_json, decode_sparse_collection_json, encode_signal_binary,
    encode_signal_json,
};
use sqlab_core::sparse::verify_sparsity;
use sqlab_core::Error;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn accepted<T>(r: &sqlab_core::Result<T>) -> bool {
    match r {
        Ok(_) => true,
        Err(Error::Decode(_)) => false,
        Err(e) => panic!("decoders report Decode errors only, got {e}"),
    }
}

#[test]
fn signal_json_seeds() {
    let mut verdicts = Vec::new();
    for (name, bytes) in seeds("signal_json") {
        let r = decode_signal_json(&bytes);
        if let Ok(f) = &r {
            assert_eq!(&decode_signal_json(&encode_signal_json(f).unwrap()).unwrap(), f);
        }
        verdicts.push((name, accepted(&r)));
    }
    let want = [
        ("extremes", true),
        ("min_offset_empty", true),
        ("small", true),
        ("unknown_field", false),
        ("window_overflow", false),
    ];
    let want: Vec<_> = want.iter().map(|(n, a)| (n.to_string(), *a)).collect();
    assert_eq!(verdicts, want);
}

#[test]
fn signal_binary_seeds() {
    let mut verdicts = Vec::new();
    for (name, bytes) in seeds("signal_binary") {
        let r = decode_signal_binary(&bytes);
        if let Ok(f) = &r {
            assert_eq!(encode_signal_binary(f), bytes);
        }
        verdicts.push((name, accepted(&r)));
    }
    let want = [
        ("empty", true),
        ("huge_length", false),
        ("length_mismatch", false),
        ("nan_sample", false),
        ("short_header", false),
        ("small", true),
    ];
    let want: Vec<_> = want.iter().map(|(n, a)| (n.to_string(), *a)).collect();
    assert_eq!(verdicts, want);
}

#[test]
fn sparse_collection_seeds() {
    let mut verdicts = Vec::new();
    for (name, bytes) in seeds("sparse_collection_json") {
        let r = decode_sparse_collection_json(&bytes);
        if let Ok(c) = &r {
            assert!(verify_sparsity(c));
        }
        verdicts.push((name, accepted(&r)));
    }
    let want = [
        ("empty", true),
        ("nested", true),
        ("overlapping", false),
        ("single", true),
        ("thin_witness", false),
        ("wide", false),
    ];
    let want: Vec<_> = want.iter().map(|(n, a)| (n.to_string(), *a)).collect();
    assert_eq!(verdicts, want);
}
