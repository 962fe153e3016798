#![no_main]

use libfuzzer_sys::fuzz_target;

use hlgap::format::{graph_to_json, parse_graph_json};
use hlgap::graph::recover_voltage;

fuzz_target!(|data: &str| {
    let Ok(g) = parse_graph_json(data) else { return };
    // accepted graphs serialize and re-parse to the same adjacency
    let again = parse_graph_json(&graph_to_json(&g)).expect("serialized graph parses");
    assert_eq!(again.adjacency(), g.adjacency());
    if g.n() <= 32 {
        let _ = recover_voltage(&g, 1e-9);
    }
});
