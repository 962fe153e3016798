//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use hlgap::format::{bridge_to_json, graph_to_json, parse_bridge_json, parse_graph_json, parse_vertex_list};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn graph_json_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("graph_json") {
        let text = String::from_utf8(data).unwrap();
        match parse_graph_json(&text) {
            Ok(g) => {
                accepted += 1;
                assert_eq!(parse_graph_json(&graph_to_json(&g)).unwrap().adjacency(), g.adjacency(), "{name}");
            }
            Err(_) => assert_eq!(name, "duplicate_edge.json"),
        }
    }
    assert!(accepted >= 4);
}

#[test]
fn bridge_json_seeds() {
    for (name, data) in seeds("bridge_json") {
        let (n, m) = (1 + data[0] as usize % 16, 1 + data[1] as usize % 16);
        let text = std::str::from_utf8(&data[2..]).unwrap();
        let spec = parse_bridge_json(text, n, m).unwrap_or_else(|e| panic!("{name}: {e}"));
        let bm = spec.to_matrix(&vec![1.0; n], &vec![1.0; m]).unwrap();
        assert_eq!(parse_bridge_json(&bridge_to_json(&bm), n, m).unwrap(), spec);
    }
}

#[test]
fn vertex_list_seeds() {
    for (name, data) in seeds("vertex_list") {
        let v = parse_vertex_list(std::str::from_utf8(&data).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!v.is_empty());
    }
}
