//! Voltage graphs: weighted adjacency `A = D Ā D` with binary `Ā` and a
//! nonzero diagonal `D`.

use std::collections::VecDeque;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageDecomposition {
    pub binary: SymMatrix,
    pub d: Vec<f64>,
}

impl VoltageDecomposition {
    /// `D · binary · D`.
    pub fn weighted(&self) -> SymMatrix {
        SymMatrix::from_upper_fn(self.d.len(), |i, j| self.d[i] * self.binary.get(i, j) * self.d[j])
    }
}

pub fn from_voltage(binary: &SymMatrix, d: &[f64]) -> Result<WeightedGraph> {
    let n = binary.dim();
    if d.len() != n {
        return Err(Error::DimensionMismatch(format!("{} voltage entries for {} vertices", d.len(), n)));
    }
    for i in 0..n {
        for j in i..n {
            let v = binary.get(i, j);
            if v != 0.0 && v != 1.0 {
                return Err(Error::NonBinaryInput { row: i, col: j, value: v });
            }
        }
    }
    if let Some(index) = d.iter().position(|&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::ZeroDiagonal { index });
    }
    let dec = VoltageDecomposition { binary: binary.clone(), d: d.to_vec() };
    Ok(WeightedGraph::new(dec.weighted()))
}

/// Finds `D` with `A = D Ā D`, where `Ā` is the nonzero pattern of `A`.
///
/// Per connected component the root gets `D = +1` when the component is
/// bipartite and loop-free (the magnitude is then a free gauge); otherwise the
/// first odd cycle or loop fixes `|D_root|`. Every edge and loop is verified
/// against `tol · max(1, |w|)`.
pub fn recover_voltage(g: &WeightedGraph, tol: f64) -> Result<VoltageDecomposition> {
    let a = g.adjacency();
    let n = g.n();
    let binary = g.binary_adjacency();

    // D_i = sign_i · exp(parity_i · x_root + offset_i)
    let mut sign = vec![0.0f64; n];
    let mut parity = vec![0.0f64; n];
    let mut offset = vec![0.0f64; n];
    let mut d = vec![0.0f64; n];
    let mut visited = vec![false; n];

    for root in 0..n {
        if visited[root] {
            continue;
        }
        let mut component = vec![root];
        visited[root] = true;
        sign[root] = 1.0;
        parity[root] = 1.0;
        offset[root] = 0.0;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                let w = a.get(i, j);
                if j == i || w == 0.0 || visited[j] {
                    continue;
                }
                visited[j] = true;
                sign[j] = w.signum() * sign[i];
                parity[j] = -parity[i];
                offset[j] = w.abs().ln() - offset[i];
                component.push(j);
                queue.push_back(j);
            }
        }

        // x_root is fixed by the first constraint whose parities agree.
        let mut x_root = 0.0;
        'fix: for &i in &component {
            for &j in &component {
                let w = a.get(i, j);
                if j < i || w == 0.0 || parity[i] != parity[j] {
                    continue;
                }
                if i == j && w < 0.0 {
                    return Err(Error::NotVoltageGraph(format!("loop weight {} at vertex {} is negative", w, i + 1)));
                }
                x_root = (w.abs().ln() - offset[i] - offset[j]) / (2.0 * parity[i]);
                break 'fix;
            }
        }
        for &i in &component {
            d[i] = sign[i] * (parity[i] * x_root + offset[i]).exp();
        }
    }

    for i in 0..n {
        for j in i..n {
            let w = a.get(i, j);
            if w == 0.0 {
                continue;
            }
            if i == j && w < 0.0 {
                return Err(Error::NotVoltageGraph(format!("loop weight {} at vertex {} is negative", w, i + 1)));
            }
            let got = d[i] * d[j];
            if (got - w).abs() > tol * w.abs().max(1.0) {
                return Err(Error::NotVoltageGraph(format!(
                    "entry ({}, {}) = {} cannot be matched (gauge gives {})",
                    i + 1,
                    j + 1,
                    w,
                    got
                )));
            }
        }
    }
    Ok(VoltageDecomposition { binary, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin::{self, builtin};
    use proptest::prelude::*;

    #[test]
    fn benzene_weighted_from_voltage() {
        let b0 = from_voltage(&builtin::cycle(6).binary_adjacency(), &[1.0, 1.0, 2.0, 1.0, 1.0, 2.0]).unwrap();
        let a = b0.adjacency();
        let expected = [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 2.0), (3, 4, 1.0), (4, 5, 2.0), (5, 0, 2.0)];
        for (i, j, w) in expected {
            assert_eq!(a.get(i, j), w);
        }
    }

    #[test]
    fn identity_voltage_keeps_weights() {
        let bin = builtin("fulvene").unwrap().graph.binary_adjacency();
        let g = from_voltage(&bin, &[1.0; 6]).unwrap();
        assert_eq!(g.adjacency(), &bin);
    }

    #[test]
    fn pyridine_weights() {
        let p = builtin("pyridine").unwrap().graph;
        let a = p.adjacency();
        let s = 0.5f64.sqrt();
        assert!((a.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((a.get(0, 1) - 0.8).abs() < 1e-15);
        assert!((a.get(0, 5) - 0.8).abs() < 1e-15);
        assert!((a.get(1, 2) - 0.8 / s).abs() < 1e-15);
        assert_eq!(a.get(2, 3), 1.0);
    }

    #[test]
    fn input_validation() {
        let bad = SymMatrix::from_rows(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(from_voltage(&bad, &[1.0, 1.0]), Err(Error::NonBinaryInput { .. })));
        let ok = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(from_voltage(&ok, &[1.0, 0.0]), Err(Error::ZeroDiagonal { index: 1 }));
        assert!(matches!(from_voltage(&ok, &[1.0]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn recovers_builtin_gauges() {
        for (name, expected) in [
            ("B0", vec![1.0, 1.0, 2.0, 1.0, 1.0, 2.0]),
            ("F0", vec![1.0, 1.0, 2.0, 0.5, 2.0, 4.0]),
            ("benzene", vec![1.0; 6]),
        ] {
            let dec = recover_voltage(&builtin(name).unwrap().graph, 1e-9).unwrap();
            for (a, b) in dec.d.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-12, "{name}: {:?}", dec.d);
            }
        }
        // odd cycle plus loop: magnitude fixed by the loop
        let p = builtin("pyridine").unwrap();
        let dec = recover_voltage(&p.graph, 1e-9).unwrap();
        for (a, b) in dec.d.iter().zip(&p.voltage) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn four_cycle_with_inconsistent_weights() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 2.0)], &[]).unwrap();
        assert!(matches!(recover_voltage(&g, 1e-9), Err(Error::NotVoltageGraph(_))));

        // Gauge search: D1 over a log grid and both signs; the first three
        // edges then force D2..D4 and the closing edge must match.
        for s in [-1.0, 1.0] {
            for k in -400..=400 {
                let d1 = s * 10f64.powf(k as f64 / 100.0);
                let d2 = 1.0 / d1;
                let d3 = 1.0 / d2;
                let d4 = 1.0 / d3;
                assert!((d4 * d1 - 2.0).abs() > 0.5);
            }
        }
    }

    #[test]
    fn negative_loop_is_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)], &[(0, -1.0)]).unwrap();
        assert!(matches!(recover_voltage(&g, 1e-9), Err(Error::NotVoltageGraph(_))));
    }

    #[test]
    fn isolated_vertices_get_unit_voltage() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 4.0)], &[]).unwrap();
        let dec = recover_voltage(&g, 1e-9).unwrap();
        assert_eq!(dec.d[2], 1.0);
        assert!(dec.weighted().max_abs_diff(g.adjacency()) < 1e-12);
    }

    fn voltage_case() -> impl Strategy<Value = (SymMatrix, Vec<f64>)> {
        (1usize..8).prop_flat_map(|n| {
            (
                proptest::collection::vec(proptest::bool::weighted(0.4), n * n),
                proptest::collection::vec((0.25f64..4.0, proptest::bool::ANY), n),
            )
                .prop_map(move |(bits, d)| {
                    let bin = SymMatrix::from_upper_fn(n, |i, j| if bits[i * n + j] { 1.0 } else { 0.0 });
                    let d = d.into_iter().map(|(m, neg)| if neg { -m } else { m }).collect();
                    (bin, d)
                })
        })
    }

    proptest! {
        #[test]
        fn voltage_round_trip((bin, d) in voltage_case()) {
            let g = from_voltage(&bin, &d).unwrap();
            let dec = recover_voltage(&g, 1e-9).unwrap();
            prop_assert_eq!(&dec.binary, &bin);
            prop_assert!(dec.d.iter().all(|&x| x != 0.0));
            let again = from_voltage(&dec.binary, &dec.d).unwrap();
            prop_assert!(again.adjacency().max_abs_diff(g.adjacency()) <= 1e-9 * g.adjacency().scale());
        }
    }
}
