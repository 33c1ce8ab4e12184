#![no_main]

use circuit_codes::CanonicalKey;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let input = String::from_utf8_lossy(data);
    if let Ok(key) = CanonicalKey::from_hex(&input) {
        assert_eq!(CanonicalKey::from_hex(&key.to_hex()).expect("own hex parses"), key);
    }
});
