#![no_main]

use circuit_codes::Permutation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else {
        return;
    };
    let input = String::from_utf8_lossy(rest);
    if let Ok(p) = Permutation::parse_cycles(&input, d as usize % 40) {
        let again = Permutation::parse_cycles(&p.cycle_notation(), p.dim()).expect("cycle notation parses");
        assert_eq!(again, p);
    }
});
