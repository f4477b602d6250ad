#![no_main]

use libfuzzer_sys::fuzz_target;
use sqlab_core::codec::{decode_signal_json, encode_signal_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = decode_signal_json(data) {
        let bytes = encode_signal_json(&f).expect("decoded signals re-encode");
        assert_eq!(decode_signal_json(&bytes).expect("round trip"), f);
    }
});
