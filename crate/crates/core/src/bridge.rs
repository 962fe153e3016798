//! Bridged graphs `B_H(G_A, G_B)` with adjacency `C = [[A, H], [Hᵀ, B]]`.
//!
//! Rows of `H` index vertices of `G_A` (all of them may be bridged), columns
//! index vertices of `G_B`, and only columns in the bridge set may carry
//! edges. When `G_B` is arbitrarily bridgeable over that set the Schur
//! complement collapses to `S = A`, so `C` is invertible with
//! `det C = det A · det B` and its inverse is available in closed form.

use crate::error::{Error, Result};
use crate::graph::{bridgeability_violation, WeightedGraph};
use crate::matrix::{assemble, congruence_q, Block, SymMatrix};

/// Binary bridge `H̃` together with its voltage-weighted form `H = D^A H̃ D^B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeMatrix {
    htilde: Block,
    h: Block,
    bridge_set: Vec<usize>,
}

impl BridgeMatrix {
    /// `htilde` is `n × m` in the original vertex numbering of `G_B`;
    /// `bridge_set` lists 0-based vertices of `G_B`.
    pub fn new(htilde: Block, bridge_set: Vec<usize>, da: &[f64], db: &[f64]) -> Result<Self> {
        if htilde.rows() != da.len() || htilde.cols() != db.len() {
            return Err(Error::DimensionMismatch(format!(
                "bridge is {}x{}, graphs have {} and {} vertices",
                htilde.rows(),
                htilde.cols(),
                da.len(),
                db.len()
            )));
        }
        for i in 0..htilde.rows() {
            for j in 0..htilde.cols() {
                let v = htilde.get(i, j);
                if v != 0.0 && v != 1.0 {
                    return Err(Error::NonBinaryInput { row: i, col: j, value: v });
                }
            }
        }
        validate_vertex_set(&bridge_set, db.len())?;
        let h = htilde.diag_scaled(da, db);
        Ok(BridgeMatrix { htilde, h, bridge_set })
    }

    /// Builds `H̃` from 0-based `(a_vertex, b_vertex)` pairs.
    pub fn from_edges(edges: &[(usize, usize)], bridge_set: Vec<usize>, da: &[f64], db: &[f64]) -> Result<Self> {
        let mut htilde = Block::zeros(da.len(), db.len());
        for &(a, b) in edges {
            if a >= da.len() || b >= db.len() {
                return Err(Error::InvalidArgument(format!("bridge edge ({}, {}) out of range", a + 1, b + 1)));
            }
            htilde.set(a, b, 1.0);
        }
        Self::new(htilde, bridge_set, da, db)
    }

    pub fn htilde(&self) -> &Block {
        &self.htilde
    }

    pub fn h(&self) -> &Block {
        &self.h
    }

    pub fn bridge_set(&self) -> &[usize] {
        &self.bridge_set
    }

    pub fn k_b(&self) -> usize {
        self.bridge_set.len()
    }

    /// `(a, b)` pairs of bridged vertices, 0-based, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.htilde.rows() {
            for j in 0..self.htilde.cols() {
                if self.htilde.get(i, j) != 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// First bridge edge landing outside the bridge set, if any.
    pub fn column_violation(&self) -> Option<(usize, usize)> {
        self.edges().into_iter().find(|(_, b)| !self.bridge_set.contains(b))
    }

    /// `H̃` with the bridge-set columns moved to the front.
    pub fn permuted_htilde(&self) -> Block {
        let order = front_order(self.htilde.cols(), &self.bridge_set);
        Block::from_fn(self.htilde.rows(), self.htilde.cols(), |i, j| self.htilde.get(i, order[j]))
    }
}

fn validate_vertex_set(set: &[usize], m: usize) -> Result<()> {
    for (k, &v) in set.iter().enumerate() {
        if v >= m {
            return Err(Error::InvalidArgument(format!("bridge vertex {} exceeds {} vertices", v + 1, m)));
        }
        if set[..k].contains(&v) {
            return Err(Error::InvalidArgument(format!("bridge vertex {} repeated", v + 1)));
        }
    }
    Ok(())
}

/// Vertex order with `set` first (as given) and the rest ascending.
pub fn front_order(m: usize, set: &[usize]) -> Vec<usize> {
    let mut order = set.to_vec();
    order.extend((0..m).filter(|v| !set.contains(v)));
    order
}

/// Permutation `π` (new index of old vertex `v` is `π[v]`) moving `set` to the front.
pub fn front_permutation(m: usize, set: &[usize]) -> Vec<usize> {
    let order = front_order(m, set);
    let mut pi = vec![0; m];
    for (new, &old) in order.iter().enumerate() {
        pi[old] = new;
    }
    pi
}

/// `[[0, H], [Hᵀ, 0]]`.
pub fn bipartite_adjacency(h: &Block) -> SymMatrix {
    let (n, m) = (h.rows(), h.cols());
    assemble(&SymMatrix::zeros(n), &SymMatrix::zeros(m), h).expect("zero blocks sized from H")
}

/// True iff every column past the first `k_b` is zero.
pub fn check_column_constraint(htilde: &Block, k_b: usize) -> bool {
    (0..htilde.rows()).all(|i| (k_b..htilde.cols()).all(|j| htilde.get(i, j) == 0.0))
}

#[derive(Debug, Clone)]
pub struct BridgedGraph {
    graph: WeightedGraph,
    n_a: usize,
    bridge: BridgeMatrix,
}

impl BridgedGraph {
    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn adjacency(&self) -> &SymMatrix {
        self.graph.adjacency()
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.graph.n() - self.n_a
    }

    pub fn bridge(&self) -> &BridgeMatrix {
        &self.bridge
    }

    /// True when entry `(i, j)` of `C` couples `G_A` to `G_B`.
    pub fn is_bridge_entry(&self, i: usize, j: usize) -> bool {
        (i < self.n_a) != (j < self.n_a)
    }
}

fn check_feasible(b_inv: &SymMatrix, bm: &BridgeMatrix) -> Result<()> {
    if let Some((row, col)) = bm.column_violation() {
        return Err(Error::ColumnConstraintViolated { row, col });
    }
    if let Some((row, col, value)) = bridgeability_violation(b_inv, bm.bridge_set()) {
        return Err(Error::NotBridgeable { row, col, value });
    }
    Ok(())
}

/// Assembles `C`; vertices of `G_B` keep their numbering after those of `G_A`.
pub fn build_bridged(ga: &WeightedGraph, gb: &WeightedGraph, bm: &BridgeMatrix) -> Result<BridgedGraph> {
    check_shape(ga, gb, bm)?;
    check_feasible(&gb.inverse()?, bm)?;
    Ok(assemble_bridged(ga, gb, bm))
}

/// Assembly without the bridgeability checks.
pub(crate) fn assemble_bridged(ga: &WeightedGraph, gb: &WeightedGraph, bm: &BridgeMatrix) -> BridgedGraph {
    let c = assemble(ga.adjacency(), gb.adjacency(), bm.h()).expect("shapes checked");
    let labels =
        ga.labels().iter().map(|l| format!("A{l}")).chain(gb.labels().iter().map(|l| format!("B{l}"))).collect();
    let graph = WeightedGraph::with_labels(c, labels).expect("label count matches");
    BridgedGraph { graph, n_a: ga.n(), bridge: bm.clone() }
}

fn check_shape(ga: &WeightedGraph, gb: &WeightedGraph, bm: &BridgeMatrix) -> Result<()> {
    if bm.h().rows() != ga.n() || bm.h().cols() != gb.n() {
        return Err(Error::DimensionMismatch(format!(
            "bridge is {}x{}, graphs have {} and {} vertices",
            bm.h().rows(),
            bm.h().cols(),
            ga.n(),
            gb.n()
        )));
    }
    Ok(())
}

/// True iff `‖H B⁻¹ Hᵀ‖_max ≤ 1e-10 · max(1, ‖H‖²_max ‖B⁻¹‖_max)`.
pub fn verify_null_quadratic(gb: &WeightedGraph, bm: &BridgeMatrix) -> Result<bool> {
    if bm.h().cols() != gb.n() {
        return Err(Error::DimensionMismatch("bridge columns must match G_B".into()));
    }
    let b_inv = gb.inverse()?;
    let q = bm.h().mul_sym(&b_inv).matmul(&bm.h().transpose());
    let scale = (bm.h().max_abs().powi(2) * b_inv.max_abs()).max(1.0);
    Ok(q.max_abs() <= 1e-10 * scale)
}

/// Closed-form `C⁻¹` using `S = A`:
/// `[[A⁻¹, −A⁻¹HB⁻¹], [−B⁻¹HᵀA⁻¹, B⁻¹ + B⁻¹HᵀA⁻¹HB⁻¹]]`.
pub fn bridged_inverse(ga: &WeightedGraph, gb: &WeightedGraph, bm: &BridgeMatrix) -> Result<SymMatrix> {
    check_shape(ga, gb, bm)?;
    let b_inv = gb.inverse()?;
    check_feasible(&b_inv, bm)?;
    let a_inv = ga.inverse()?;
    Ok(bridged_inverse_from(&a_inv, &b_inv, bm.h()))
}

/// [`bridged_inverse`] from precomputed block inverses; feasibility is the
/// caller's responsibility.
pub fn bridged_inverse_from(a_inv: &SymMatrix, b_inv: &SymMatrix, h: &Block) -> SymMatrix {
    let n = a_inv.dim();
    let hb = h.mul_sym(b_inv); // H B⁻¹
    let upper_right = a_inv.matmul(&hb).scaled(-1.0);
    let lower_right = hb.transpose().mul_sym(a_inv).matmul(&hb);
    SymMatrix::from_upper_fn(n + b_inv.dim(), |i, j| match (i < n, j < n) {
        (true, true) => a_inv.get(i, j),
        (true, false) => upper_right.get(i, j - n),
        (false, false) => {
            let (p, q) = (i - n, j - n);
            b_inv.get(p, q) + 0.5 * (lower_right.get(p, q) + lower_right.get(q, p))
        }
        (false, true) => unreachable!("upper triangle only"),
    })
}

/// `Q` of the congruence `C⁻¹ = Qᵀ diag(A⁻¹, B⁻¹) Q` for a bridge.
pub fn bridge_congruence(gb: &WeightedGraph, bm: &BridgeMatrix) -> Result<Block> {
    Ok(congruence_q(bm.h(), &gb.inverse()?))
}
