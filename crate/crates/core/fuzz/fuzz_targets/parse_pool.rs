#![no_main]

use circuit_codes::joiner::parse_pool;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else {
        return;
    };
    let input = String::from_utf8_lossy(rest);
    _ = parse_pool(&input, 2 + d as usize % 10, 2);
});
