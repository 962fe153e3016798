use super::{Block, SymMatrix, ZERO_EIGENVALUE_REL};
use crate::error::{Error, Result};

/// Sweep cap of the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm at which iteration stops, relative to `‖M‖_F`.
const CONVERGENCE_REL: f64 = 1e-12;

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Block,
}

impl EigenSystem {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    /// `V diag(f(λ)) Vᵀ`, assembled on the upper triangle and mirrored.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let w: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_upper_fn(n, |i, j| (0..n).map(|k| self.vectors.get(i, k) * w[k] * self.vectors.get(j, k)).sum())
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
pub fn sym_eigen(m: &SymMatrix) -> Result<EigenSystem> {
    let n = m.dim();
    let mut a = m.to_block();
    let mut v = Block::identity(n);
    let threshold = CONVERGENCE_REL * m.frobenius();

    let off_norm = |a: &Block| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * a.get(p, q) * a.get(p, q);
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- Jᵀ A J with J = [[c, s], [-s, c]] acting on (p, q).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
        sweeps += 1;
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = Block::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(EigenSystem { values, vectors })
}

/// `τ_zero = 1e-9 · max(1, ‖M‖_max)`.
pub fn zero_threshold(m: &SymMatrix) -> f64 {
    ZERO_EIGENVALUE_REL * m.scale()
}

/// Inverse through the eigendecomposition, `V diag(1/λ) Vᵀ`.
pub fn invert(m: &SymMatrix) -> Result<SymMatrix> {
    let es = sym_eigen(m)?;
    let min_abs = es.values.iter().fold(f64::INFINITY, |acc, l| acc.min(l.abs()));
    if min_abs < zero_threshold(m) {
        return Err(Error::SingularMatrix { min_abs_eigenvalue: min_abs });
    }
    Ok(es.reconstruct_with(|l| 1.0 / l))
}

pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    Ok(sym_eigen(m)?.min())
}

/// `λ_min(M) ≥ −tol · max(1, ‖M‖_max)`.
pub fn is_psd(m: &SymMatrix, tol: f64) -> Result<bool> {
    debug_assert!(tol >= 0.0);
    Ok(min_eigenvalue(m)? >= -tol * m.scale())
}

/// Löwner order `a ⪯ b`, i.e. `b − a` positive semidefinite.
pub fn loewner_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool> {
    is_psd(&b.sub(a)?, tol)
}

/// Product of eigenvalues.
pub fn determinant(m: &SymMatrix) -> Result<f64> {
    Ok(sym_eigen(m)?.values.iter().product())
}
