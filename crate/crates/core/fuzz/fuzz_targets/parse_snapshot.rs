#![no_main]
use libfuzzer_sys::fuzz_target;
use partial_paths::geo::text::{parse_snapshot, write_snapshot};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_snapshot(text) {
        let again = parse_snapshot(&write_snapshot(&s)).expect("written snapshot parses");
        assert_eq!(again, s);
    }
});
