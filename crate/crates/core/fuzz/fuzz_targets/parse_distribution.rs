#![no_main]
use libfuzzer_sys::fuzz_target;
use partial_paths::distributions::table::{parse_distribution, write_distribution};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_distribution(text) {
        let again = parse_distribution(&write_distribution(&d)).expect("written distribution parses");
        assert_eq!(again.support().collect::<Vec<_>>(), d.support().collect::<Vec<_>>());
    }
});
