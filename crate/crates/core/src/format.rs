//! Text formats: graph JSON, bridge JSON, vertex lists and DOT export.
//!
//! Graph JSON:
//! `{"n": 6, "labels": ["C1", …]?, "edges": [[i, j, w], …], "loops": [[i, w], …]?}`
//! with 1-based `i < j` and finite nonzero `w`.
//!
//! Bridge JSON:
//! `{"k_B": 2, "bridge_set": [1, 2], "edges": [[a, b], …]}` listing the
//! 1-entries of `H̃` as (`G_A` vertex, `G_B` vertex), both 1-based.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bridge::{BridgeMatrix, BridgedGraph};
use crate::error::{Error, Result};
use crate::graph::{builtin, recover_voltage, WeightedGraph};
use crate::matrix::SymMatrix;

/// Largest vertex count accepted from graph JSON.
pub const MAX_JSON_VERTICES: usize = 1024;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    loops: Option<Vec<(usize, f64)>>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn check_weight(w: f64, what: impl Fn() -> String) -> Result<()> {
    if !w.is_finite() || w == 0.0 {
        return Err(parse_err(format!("{}: weight must be finite and nonzero, got {w}", what())));
    }
    Ok(())
}

pub fn parse_graph_json(text: &str) -> Result<WeightedGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| parse_err(format!("graph JSON: {e}")))?;
    let n = doc.n;
    if n == 0 || n > MAX_JSON_VERTICES {
        return Err(parse_err(format!("n must be in 1..={MAX_JSON_VERTICES}, got {n}")));
    }
    let mut adj = SymMatrix::zeros(n);
    for &(i, j, w) in &doc.edges {
        if !(1 <= i && i < j && j <= n) {
            return Err(parse_err(format!("edge [{i}, {j}] needs 1 <= i < j <= {n}")));
        }
        check_weight(w, || format!("edge [{i}, {j}]"))?;
        if adj.get(i - 1, j - 1) != 0.0 {
            return Err(parse_err(format!("duplicate edge [{i}, {j}]")));
        }
        adj.set(i - 1, j - 1, w);
    }
    for &(i, w) in doc.loops.iter().flatten() {
        if !(1..=n).contains(&i) {
            return Err(parse_err(format!("loop at {i} is outside 1..={n}")));
        }
        check_weight(w, || format!("loop [{i}]"))?;
        if adj.get(i - 1, i - 1) != 0.0 {
            return Err(parse_err(format!("duplicate loop at {i}")));
        }
        adj.set(i - 1, i - 1, w);
    }
    match doc.labels {
        Some(labels) => WeightedGraph::with_labels(adj, labels).map_err(|e| parse_err(e.to_string())),
        None => Ok(WeightedGraph::new(adj)),
    }
}

/// Serializes the upper triangle; labels are written only when they differ
/// from the default `1..=n`.
pub fn graph_to_json(g: &WeightedGraph) -> String {
    let a = g.adjacency();
    let n = g.n();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for i in 0..n {
        if a.get(i, i) != 0.0 {
            loops.push((i + 1, a.get(i, i)));
        }
        for j in i + 1..n {
            if a.get(i, j) != 0.0 {
                edges.push((i + 1, j + 1, a.get(i, j)));
            }
        }
    }
    let default_labels = g.labels().iter().enumerate().all(|(i, l)| *l == (i + 1).to_string());
    let doc = GraphDoc {
        n,
        labels: (!default_labels).then(|| g.labels().to_vec()),
        edges,
        loops: (!loops.is_empty()).then_some(loops),
    };
    serde_json::to_string(&doc).expect("graph JSON serializes")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BridgeDoc {
    #[serde(rename = "k_B")]
    k_b: usize,
    bridge_set: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Bridge JSON with vertices converted to 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeSpec {
    pub bridge_set: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl BridgeSpec {
    pub fn to_matrix(&self, da: &[f64], db: &[f64]) -> Result<BridgeMatrix> {
        BridgeMatrix::from_edges(&self.edges, self.bridge_set.clone(), da, db)
    }
}

/// Parses bridge JSON for `G_A` with `n` and `G_B` with `m` vertices.
pub fn parse_bridge_json(text: &str, n: usize, m: usize) -> Result<BridgeSpec> {
    let doc: BridgeDoc = serde_json::from_str(text).map_err(|e| parse_err(format!("bridge JSON: {e}")))?;
    if doc.k_b != doc.bridge_set.len() {
        return Err(parse_err(format!("k_B = {} but bridge_set has {} vertices", doc.k_b, doc.bridge_set.len())));
    }
    let mut set = BTreeSet::new();
    for &b in &doc.bridge_set {
        if !(1..=m).contains(&b) {
            return Err(parse_err(format!("bridge_set vertex {b} is outside 1..={m}")));
        }
        if !set.insert(b - 1) {
            return Err(parse_err(format!("bridge_set repeats vertex {b}")));
        }
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in &doc.edges {
        if !(1..=n).contains(&a) || !(1..=m).contains(&b) {
            return Err(parse_err(format!("bridge edge [{a}, {b}] is out of range")));
        }
        if !set.contains(&(b - 1)) {
            return Err(parse_err(format!("bridge edge [{a}, {b}] ends outside the bridge set")));
        }
        if !seen.insert((a, b)) {
            return Err(parse_err(format!("duplicate bridge edge [{a}, {b}]")));
        }
    }
    Ok(BridgeSpec {
        bridge_set: doc.bridge_set.iter().map(|b| b - 1).collect(),
        edges: doc.edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect(),
    })
}

pub fn bridge_to_json(bm: &BridgeMatrix) -> String {
    let doc = BridgeDoc {
        k_b: bm.k_b(),
        bridge_set: bm.bridge_set().iter().map(|b| b + 1).collect(),
        edges: bm.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
    };
    serde_json::to_string(&doc).expect("bridge JSON serializes")
}

/// Parses `"1,3"` into 0-based `[0, 2]`; repeats and zero are rejected.
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let v: usize = part.parse().map_err(|_| parse_err(format!("`{part}` is not a vertex number")))?;
        if v == 0 {
            return Err(parse_err("vertex numbers are 1-based"));
        }
        if out.contains(&(v - 1)) {
            return Err(parse_err(format!("vertex {v} is listed twice")));
        }
        out.push(v - 1);
    }
    Ok(out)
}

/// Six significant digits without exponent or trailing zeros.
pub fn format_sig6(w: f64) -> String {
    if w == 0.0 || !w.is_finite() {
        return format!("{w}");
    }
    let mag = w.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let s = if mag > 5 {
        let p = 10f64.powi(mag - 5);
        format!("{:.0}", (w / p).round() * p)
    } else {
        format!("{w:.decimals$}")
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn dot(g: &WeightedGraph, is_bridge: impl Fn(usize, usize) -> bool) -> String {
    let a = g.adjacency();
    let mut out = String::from("graph G {\n");
    for (i, label) in g.labels().iter().enumerate() {
        out.push_str(&format!("  {} [label=\"{}\"];\n", i + 1, label.replace('"', "\\\"")));
    }
    for i in 0..g.n() {
        for j in i..g.n() {
            let w = a.get(i, j);
            if w == 0.0 {
                continue;
            }
            let style = if is_bridge(i, j) { ", style=dashed" } else { "" };
            out.push_str(&format!("  {} -- {} [label=\"{}\"{style}];\n", i + 1, j + 1, format_sig6(w)));
        }
    }
    out.push_str("}\n");
    out
}

pub fn graph_to_dot(g: &WeightedGraph) -> String {
    dot(g, |_, _| false)
}

/// Bridge edges are drawn dashed.
pub fn bridged_to_dot(c: &BridgedGraph) -> String {
    dot(c.graph(), |i, j| c.is_bridge_entry(i, j))
}

/// A graph loaded from `builtin:NAME` or a graph JSON file.
#[derive(Debug, Clone)]
pub struct GraphSource {
    pub name: String,
    pub graph: WeightedGraph,
    builtin_voltage: Option<Vec<f64>>,
}

impl GraphSource {
    pub fn load(spec: &str) -> Result<Self> {
        if let Some(name) = spec.strip_prefix("builtin:") {
            let b = builtin::builtin(name)?;
            return Ok(GraphSource { name: spec.to_string(), graph: b.graph, builtin_voltage: Some(b.voltage) });
        }
        let text = std::fs::read_to_string(Path::new(spec)).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        let graph = parse_graph_json(&text)?;
        Ok(GraphSource { name: spec.to_string(), graph, builtin_voltage: None })
    }

    /// Voltage diagonal: the registered one for builtins, otherwise the gauge
    /// recovered from the weights.
    pub fn voltage(&self, tol: f64) -> Result<Vec<f64>> {
        match &self.builtin_voltage {
            Some(d) => Ok(d.clone()),
            None => Ok(recover_voltage(&self.graph, tol)?.d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::build_bridged;
    use crate::graph::builtin::{builtin, builtin_names};

    #[test]
    fn builtins_round_trip_exactly() {
        for name in builtin_names() {
            let g = builtin(name).unwrap().graph;
            let back = parse_graph_json(&graph_to_json(&g)).unwrap();
            assert_eq!(back.adjacency(), g.adjacency(), "{name}");
        }
    }

    #[test]
    fn graph_json_contract() {
        let g = parse_graph_json(r#"{"n": 3, "edges": [[1, 2, 0.5], [2, 3, -1]], "loops": [[3, 2]]}"#).unwrap();
        assert_eq!(g.adjacency().get(0, 1), 0.5);
        assert_eq!(g.adjacency().get(2, 1), -1.0);
        assert_eq!(g.adjacency().get(2, 2), 2.0);
        let labelled = parse_graph_json(r#"{"n": 2, "labels": ["N", "C"], "edges": [[1, 2, 1]]}"#).unwrap();
        assert_eq!(labelled.labels(), ["N", "C"]);
        assert!(graph_to_json(&labelled).contains("\"labels\":[\"N\",\"C\"]"));

        for bad in [
            r#"{"n": 2, "edges": [[2, 1, 1]]}"#,
            r#"{"n": 2, "edges": [[1, 1, 1]]}"#,
            r#"{"n": 2, "edges": [[1, 3, 1]]}"#,
            r#"{"n": 2, "edges": [[1, 2, 0]]}"#,
            r#"{"n": 2, "edges": [[1, 2, 1], [1, 2, 2]]}"#,
            r#"{"n": 2, "edges": [], "loops": [[1, 1], [1, 1]]}"#,
            r#"{"n": 2, "edges": [], "loops": [[0, 1]]}"#,
            r#"{"n": 0, "edges": []}"#,
            r#"{"n": 5000, "edges": []}"#,
            r#"{"n": 2, "labels": ["a"], "edges": []}"#,
            r#"{"n": 2, "edges": [], "extra": 1}"#,
            r#"{"n": 2, "edges": [[1, 2, 1e400]]}"#,
            r#"{"n": 2.5, "edges": []}"#,
            "not json",
        ] {
            assert!(matches!(parse_graph_json(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn decimal_weights_survive() {
        let text = r#"{"n":2,"edges":[[1,2,1.1313708498984762]]}"#;
        let g = parse_graph_json(text).unwrap();
        assert_eq!(graph_to_json(&g), text);
    }

    #[test]
    fn bridge_json_contract() {
        let spec = parse_bridge_json(r#"{"k_B": 2, "bridge_set": [1, 2], "edges": [[2, 2]]}"#, 6, 6).unwrap();
        assert_eq!(spec, BridgeSpec { bridge_set: vec![0, 1], edges: vec![(1, 1)] });
        let f0 = builtin("F0").unwrap();
        let bm = spec.to_matrix(&f0.voltage, &f0.voltage).unwrap();
        assert_eq!(bridge_to_json(&bm), r#"{"k_B":2,"bridge_set":[1,2],"edges":[[2,2]]}"#);

        for bad in [
            r#"{"k_B": 1, "bridge_set": [1, 2], "edges": []}"#,
            r#"{"k_B": 2, "bridge_set": [1, 1], "edges": []}"#,
            r#"{"k_B": 1, "bridge_set": [7], "edges": []}"#,
            r#"{"k_B": 1, "bridge_set": [1], "edges": [[1, 2]]}"#,
            r#"{"k_B": 1, "bridge_set": [1], "edges": [[7, 1]]}"#,
            r#"{"k_B": 1, "bridge_set": [1], "edges": [[1, 1], [1, 1]]}"#,
            r#"{"k_B": 1, "bridge_set": [1], "edges": [], "h": 1}"#,
        ] {
            assert!(matches!(parse_bridge_json(bad, 6, 6), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("1,3").unwrap(), vec![0, 2]);
        assert_eq!(parse_vertex_list(" 2 , 1 ").unwrap(), vec![1, 0]);
        for bad in ["", "0", "1,,2", "a", "1,1", "-1"] {
            assert!(parse_vertex_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(1.1313708498984762), "1.13137");
        assert_eq!(format_sig6(-0.00012345678), "-0.000123457");
        assert_eq!(format_sig6(123456789.0), "123457000");
        assert_eq!(format_sig6(9.9999996), "10");
    }

    #[test]
    fn dot_of_bridged_graph() {
        let f0 = builtin("F0").unwrap();
        let bm = BridgeMatrix::from_edges(&[(1, 1), (2, 0)], vec![0, 1], &f0.voltage, &f0.voltage).unwrap();
        let c = build_bridged(&f0.graph, &f0.graph, &bm).unwrap();
        let text = bridged_to_dot(&c);
        let nodes = text.lines().filter(|l| l.contains("[label=") && !l.contains("--")).count();
        let edges = text.lines().filter(|l| l.contains(" -- ")).count();
        assert_eq!(nodes, 12);
        assert_eq!(edges, 6 + 6 + 2);
        assert_eq!(text.matches("style=dashed").count(), 2);
        assert!(text.contains("  3 -- 7 [label=\"2\", style=dashed];"));
    }

    #[test]
    fn graph_sources() {
        let s = GraphSource::load("builtin:F0").unwrap();
        assert_eq!(s.voltage(1e-9).unwrap(), vec![1.0, 1.0, 2.0, 0.5, 2.0, 4.0]);
        assert!(matches!(GraphSource::load("builtin:nope"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(GraphSource::load("/nonexistent/graph.json"), Err(Error::Io(_))));
    }
}
