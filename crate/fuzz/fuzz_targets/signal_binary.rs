#![no_main]

use libfuzzer_sys::fuzz_target;
use sqlab_core::codec::{decode_signal_binary, encode_signal_binary};

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = decode_signal_binary(data) {
        // The layout has no slack, so a successful decode re-encodes byte for byte.
        assert_eq!(encode_signal_binary(&f), data);
    }
});
