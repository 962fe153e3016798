#![no_main]

use libfuzzer_sys::fuzz_target;

use hlgap::format::parse_vertex_list;

fuzz_target!(|data: &str| {
    if let Ok(v) = parse_vertex_list(data) {
        assert!(!v.is_empty());
    }
});
