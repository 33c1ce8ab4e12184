#![no_main]

use circuit_codes::parse_sequence;
use libfuzzer_sys::fuzz_target;

// First byte picks the dimension, the rest is the sequence text.
fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(seq) = parse_sequence(text, d as usize % 40) {
        let again = parse_sequence(&seq.to_string(), seq.dim()).expect("printed form parses");
        assert_eq!(again, seq);
    }
});
