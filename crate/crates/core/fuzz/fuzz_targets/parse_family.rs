#![no_main]
use libfuzzer_sys::fuzz_target;
use partial_paths::distributions::table::{parse_family, write_family};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_family(text) {
        let again = parse_family(&write_family(&f)).expect("written family parses");
        assert_eq!(again.h_max(), f.h_max());
    }
});
