//! Builtin molecule graphs: benzene, fulvene, pyridine and the weighted
//! benzene/fulvene voltage graphs used in the bridging experiments.

use super::{from_voltage, WeightedGraph};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Fulvene carbon skeleton, 1-based: a five-ring 1-2-3-4-5 with the exocyclic
/// vertex 6 on 4.
pub const FULVENE_EDGES: [(usize, usize); 6] = [(1, 2), (1, 5), (2, 3), (3, 4), (4, 5), (4, 6)];

pub const FULVENE_VOLTAGE: [f64; 6] = [1.0, 1.0, 2.0, 0.5, 2.0, 4.0];
pub const BENZENE_VOLTAGE: [f64; 6] = [1.0, 1.0, 2.0, 1.0, 1.0, 2.0];

/// Pyridine heteroatom constants: `h_N` (Coulomb) and `k_CN` (resonance).
pub const PYRIDINE_H_N: f64 = 0.5;
pub const PYRIDINE_K_CN: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: &'static str,
    pub graph: WeightedGraph,
    /// Voltage diagonal `D` with `A = D Ā D`.
    pub voltage: Vec<f64>,
}

const CANONICAL: [&str; 5] = ["benzene", "benzene-weighted", "fulvene", "fulvene-weighted", "pyridine"];

pub fn builtin_names() -> &'static [&'static str] {
    &CANONICAL
}

/// Resolves a canonical name or one of the aliases `B0`, `B0bar`, `F0`, `F0bar`.
pub fn builtin(name: &str) -> Result<Builtin> {
    let canonical = match name {
        "benzene" | "B0bar" | "benzene-bar" => "benzene",
        "benzene-weighted" | "B0" => "benzene-weighted",
        "fulvene" | "F0bar" | "fulvene-bar" => "fulvene",
        "fulvene-weighted" | "F0" => "fulvene-weighted",
        "pyridine" => "pyridine",
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    };
    let (binary, voltage) = match canonical {
        "benzene" => (cycle(6).binary_adjacency(), vec![1.0; 6]),
        "benzene-weighted" => (cycle(6).binary_adjacency(), BENZENE_VOLTAGE.to_vec()),
        "fulvene" => (fulvene_binary(), vec![1.0; 6]),
        "fulvene-weighted" => (fulvene_binary(), FULVENE_VOLTAGE.to_vec()),
        _ => {
            let mut bin = cycle(6).binary_adjacency();
            bin.set(0, 0, 1.0);
            let s = PYRIDINE_H_N.sqrt();
            let k = PYRIDINE_K_CN / s;
            (bin, vec![s, k, 1.0, 1.0, 1.0, k])
        }
    };
    let graph = from_voltage(&binary, &voltage)?;
    Ok(Builtin { name: canonical, graph, voltage })
}

/// Unweighted cycle on `n` vertices.
pub fn cycle(n: usize) -> WeightedGraph {
    WeightedGraph::new(SymMatrix::from_upper_fn(n, |i, j| {
        if j == i + 1 || (i == 0 && j == n - 1 && n > 2) {
            1.0
        } else {
            0.0
        }
    }))
}

fn fulvene_binary() -> SymMatrix {
    SymMatrix::from_upper_fn(6, |i, j| if FULVENE_EDGES.contains(&(i + 1, j + 1)) { 1.0 } else { 0.0 })
}
