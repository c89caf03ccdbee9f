#![no_main]
use libfuzzer_sys::fuzz_target;
use partial_paths::forwarding::{parse_run_spec, write_run_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_run_spec(text) {
        let again = parse_run_spec(&write_run_spec(&spec)).expect("written spec parses");
        assert_eq!(again.a1, spec.a1);
        assert_eq!(again.model.h_max(), spec.model.h_max());
    }
});
