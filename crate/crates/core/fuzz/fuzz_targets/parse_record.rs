#![no_main]

use circuit_codes::record::Record;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else {
        return;
    };
    // A record that parses has already been verified, so it must round trip.
    if let Ok(r) = Record::parse(line) {
        assert_eq!(Record::parse(&r.to_line()).expect("own output parses"), r);
    }
});
