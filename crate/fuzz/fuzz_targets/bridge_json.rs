#![no_main]

use libfuzzer_sys::fuzz_target;

use hlgap::format::{bridge_to_json, parse_bridge_json};

fuzz_target!(|data: &[u8]| {
    // first two bytes pick the graph sizes
    if data.len() < 2 {
        return;
    }
    let n = 1 + data[0] as usize % 16;
    let m = 1 + data[1] as usize % 16;
    let Ok(text) = std::str::from_utf8(&data[2..]) else { return };
    let Ok(spec) = parse_bridge_json(text, n, m) else { return };
    let bm = spec.to_matrix(&vec![1.0; n], &vec![1.0; m]).expect("parsed bridge builds");
    let again = parse_bridge_json(&bridge_to_json(&bm), n, m).expect("serialized bridge parses");
    assert_eq!(again.to_matrix(&vec![1.0; n], &vec![1.0; m]).unwrap().htilde(), bm.htilde());
});
