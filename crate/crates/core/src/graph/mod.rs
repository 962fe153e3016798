//! Weighted (voltage) graphs, their spectra and HOMO/LUMO quantities.
//!
//! Vertices are 0-based here; every external format and every printed
//! description is 1-based.

pub mod builtin;
mod voltage;

pub use builtin::{builtin, builtin_names, Builtin};
pub use voltage::{from_voltage, recover_voltage, VoltageDecomposition};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{invert, sym_eigen, zero_threshold, SymMatrix};

/// Absolute tolerance on inverse-matrix entries for the bridgeability test.
pub const BRIDGEABLE_TOL: f64 = 1e-9;

/// Undirected vertex-labelled graph with real edge weights; diagonal entries
/// of the adjacency are loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adjacency: SymMatrix,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomoLumo {
    pub lambda_homo: f64,
    pub lambda_lumo: f64,
    pub closed_shell: bool,
}

impl WeightedGraph {
    /// Graph with default labels `1..=n`.
    pub fn new(adjacency: SymMatrix) -> Self {
        let labels = (1..=adjacency.dim()).map(|i| i.to_string()).collect();
        WeightedGraph { adjacency, labels }
    }

    pub fn with_labels(adjacency: SymMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != adjacency.dim() {
            return Err(Error::DimensionMismatch(format!("{} labels for {} vertices", labels.len(), adjacency.dim())));
        }
        Ok(WeightedGraph { adjacency, labels })
    }

    /// Builds from 0-based weighted edges `(i, j, w)` and loops `(i, w)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)], loops: &[(usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch("graph needs at least one vertex".into()));
        }
        let mut adj = SymMatrix::zeros(n);
        for &(i, j, w) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidArgument(format!("bad edge ({}, {})", i + 1, j + 1)));
            }
            adj.set(i, j, w);
        }
        for &(i, w) in loops {
            if i >= n {
                return Err(Error::InvalidArgument(format!("bad loop at {}", i + 1)));
            }
            adj.set(i, i, w);
        }
        Ok(WeightedGraph::new(adj))
    }

    pub fn n(&self) -> usize {
        self.adjacency.dim()
    }

    pub fn adjacency(&self) -> &SymMatrix {
        &self.adjacency
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// 0/1 pattern of the adjacency, loops included on the diagonal.
    pub fn binary_adjacency(&self) -> SymMatrix {
        SymMatrix::from_upper_fn(self.n(), |i, j| if self.adjacency.get(i, j) != 0.0 { 1.0 } else { 0.0 })
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(sym_eigen(&self.adjacency)?.values)
    }

    /// Smallest positive minus largest negative eigenvalue.
    pub fn spectral_gap(&self) -> Result<f64> {
        let spectrum = self.spectrum()?;
        gap_of_spectrum(&spectrum, zero_threshold(&self.adjacency))
    }

    pub fn homo_lumo(&self) -> Result<HomoLumo> {
        let s = self.spectrum()?;
        let n = s.len();
        // 1-based k = n/2 (even) or (n+1)/2 (odd); LUMO is λ_{k+1} or λ_k.
        let (homo, lumo) = if n % 2 == 0 { (s[n / 2 - 1], s[n / 2]) } else { (s[n / 2], s[n / 2]) };
        Ok(HomoLumo { lambda_homo: homo, lambda_lumo: lumo, closed_shell: homo > 0.0 && 0.0 > lumo })
    }

    /// Hückel orbital energies `E_k = α + β λ_k`.
    pub fn huckel_energies(&self, alpha: f64, beta: f64) -> Result<Vec<f64>> {
        Ok(self.spectrum()?.into_iter().map(|l| alpha + beta * l).collect())
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        invert(&self.adjacency).map_err(|e| match e {
            Error::SingularMatrix { min_abs_eigenvalue } => Error::ZeroEigenvalue { value: min_abs_eigenvalue },
            other => other,
        })
    }

    /// True iff the inverse adjacency vanishes on `set × set`.
    pub fn is_arbitrarily_bridgeable(&self, set: &[usize]) -> Result<bool> {
        Ok(bridgeability_violation(&self.inverse()?, set).is_none())
    }

    /// Relabels vertex `i` as `pi[i]`.
    pub fn permute(&self, pi: &[usize]) -> Result<WeightedGraph> {
        let inv = inverse_permutation(pi, self.n())?;
        let adjacency = SymMatrix::from_upper_fn(self.n(), |i, j| self.adjacency.get(inv[i], inv[j]));
        let labels = inv.iter().map(|&k| self.labels[k].clone()).collect();
        Ok(WeightedGraph { adjacency, labels })
    }

    /// Off-diagonal nonzero count per row; loops are not counted.
    pub fn binary_degrees(&self) -> Vec<usize> {
        let n = self.n();
        (0..n).map(|i| (0..n).filter(|&j| j != i && self.adjacency.get(i, j) != 0.0).count()).collect()
    }
}

/// First entry of `inv` on `set × set` above [`BRIDGEABLE_TOL`], if any.
pub(crate) fn bridgeability_violation(inv: &SymMatrix, set: &[usize]) -> Option<(usize, usize, f64)> {
    for (a, &i) in set.iter().enumerate() {
        for &j in &set[a..] {
            let v = inv.get(i, j);
            if v.abs() > BRIDGEABLE_TOL {
                return Some((i, j, v));
            }
        }
    }
    None
}

pub(crate) fn gap_of_spectrum(spectrum: &[f64], tau: f64) -> Result<f64> {
    if let Some(&z) = spectrum.iter().find(|l| l.abs() <= tau) {
        return Err(Error::ZeroEigenvalue { value: z });
    }
    let plus = spectrum.iter().copied().filter(|&l| l > 0.0).fold(f64::INFINITY, f64::min);
    let minus = spectrum.iter().copied().filter(|&l| l < 0.0).fold(f64::NEG_INFINITY, f64::max);
    if plus.is_infinite() {
        return Err(Error::NoPositiveEigenvalue);
    }
    if minus.is_infinite() {
        return Err(Error::NoNegativeEigenvalue);
    }
    Ok(plus - minus)
}

/// Validates `pi` as a bijection on `0..n` and returns its inverse.
pub fn inverse_permutation(pi: &[usize], n: usize) -> Result<Vec<usize>> {
    if pi.len() != n {
        return Err(Error::NotAPermutation(format!("length {} for {} vertices", pi.len(), n)));
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &p) in pi.iter().enumerate() {
        if p >= n || inv[p] != usize::MAX {
            return Err(Error::NotAPermutation(format!("image {} repeated or out of range", p + 1)));
        }
        inv[p] = i;
    }
    Ok(inv)
}
