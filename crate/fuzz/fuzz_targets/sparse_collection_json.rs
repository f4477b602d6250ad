#![no_main]

use libfuzzer_sys::fuzz_target;
use sqlab_core::codec::decode_sparse_collection_json;
use sqlab_core::sparse::verify_sparsity;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = decode_sparse_collection_json(data) {
        assert!(verify_sparsity(&c));
    }
});
