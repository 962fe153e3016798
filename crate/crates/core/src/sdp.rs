//! Semidefinite representation of the HOMO-LUMO gap.
//!
//! For invertible `C` with a mixed-sign spectrum,
//!
//! ```text
//! Λ_HL = max μ + η   s.t.   μ C⁻¹ ⪯ I,  −η C⁻¹ ⪯ I,  μ, η ≥ 0
//! ```
//!
//! with optimum `μ = 1/λ_max(C⁻¹)`, `η = −1/λ_min(C⁻¹)`. [`gap_analytic`]
//! reads the optimum off the eigenvalues of `C⁻¹`; [`gap_bisection`] finds it
//! independently by bisecting on Löwner feasibility. For bridged graphs the
//! constraints are congruent (through `Z = [[I, HB⁻¹], [0, I]]`) to the block
//! LMIs checked by [`certify_bridged_lmi`].

use serde::Serialize;

use crate::bridge::BridgeMatrix;
use crate::error::{Error, Result};
use crate::graph::{bridgeability_violation, WeightedGraph};
use crate::matrix::{loewner_leq, min_eigenvalue, sym_eigen, Block, SymMatrix};

/// Relative tolerance on certificate margins: `margin ≥ −1e-8 · max(1, ‖M‖_max)`.
pub const MARGIN_TOL: f64 = 1e-8;

const BISECTION_MAX_ITER: usize = 60;
const BISECTION_TOL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCertificate {
    pub mu: f64,
    pub eta: f64,
    pub gap: f64,
    /// Smallest eigenvalue of each certified LMI block.
    pub margins: Vec<f64>,
}

fn inverse_of(c: &SymMatrix) -> Result<SymMatrix> {
    crate::matrix::invert(c).map_err(|e| match e {
        Error::SingularMatrix { min_abs_eigenvalue } => Error::ZeroEigenvalue { value: min_abs_eigenvalue },
        other => other,
    })
}

/// Optimal `(μ, η)` from the extreme eigenvalues of `C⁻¹`.
pub fn gap_analytic(c: &SymMatrix) -> Result<GapCertificate> {
    gap_from_inverse(&inverse_of(c)?)
}

/// [`gap_analytic`] given `C⁻¹` directly.
pub fn gap_from_inverse(c_inv: &SymMatrix) -> Result<GapCertificate> {
    let es = sym_eigen(c_inv)?;
    let (top, bottom) = (es.max(), es.min());
    if top <= 0.0 || bottom >= 0.0 {
        return Err(Error::DefiniteMatrix);
    }
    let mu = 1.0 / top;
    let eta = -1.0 / bottom;
    // λ_min(I − μC⁻¹) = 1 − μ λ_max and λ_min(I + ηC⁻¹) = 1 + η λ_min
    let margins = vec![1.0 - mu * top, 1.0 + eta * bottom];
    Ok(GapCertificate { mu, eta, gap: mu + eta, margins })
}

/// Bisection on `μ ↦ [μ C⁻¹ ⪯ I]` and `η ↦ [−η C⁻¹ ⪯ I]`, each to width `tol`.
///
/// Both feasible sets are intervals `[0, λ⁺]` and `[0, −λ⁻]`; the bracket
/// starts at `2 n ‖C‖_max`, which exceeds every `|λ(C)|` by Gershgorin.
pub fn gap_bisection(c: &SymMatrix, tol: f64) -> Result<GapCertificate> {
    let tol = tol.max(BISECTION_TOL_FLOOR);
    let c_inv = inverse_of(c)?;
    let spectrum = sym_eigen(c)?.values;
    if spectrum[0] <= 0.0 || *spectrum.last().unwrap() >= 0.0 {
        return Err(Error::DefiniteMatrix);
    }
    let identity = SymMatrix::identity(c.dim());
    let upper = 2.0 * c.dim() as f64 * c.max_abs();

    let bisect = |sign: f64| -> Result<f64> {
        let feasible = |t: f64| loewner_leq(&c_inv.scaled(sign * t), &identity, 0.0);
        let (mut lo, mut hi) = (0.0, upper);
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if feasible(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    };
    let mu = bisect(1.0)?;
    let eta = bisect(-1.0)?;
    let margins =
        vec![min_eigenvalue(&identity.sub(&c_inv.scaled(mu))?)?, min_eigenvalue(&identity.add(&c_inv.scaled(eta))?)?];
    Ok(GapCertificate { mu, eta, gap: mu + eta, margins })
}

/// The two block LMIs of the bridged representation,
///
/// ```text
/// [[I − μA⁻¹, HB⁻¹], [B⁻¹Hᵀ, I − μB⁻¹ + B⁻¹WB⁻¹]] ⪰ 0
/// [[I + ηA⁻¹, HB⁻¹], [B⁻¹Hᵀ, I + ηB⁻¹ + B⁻¹WB⁻¹]] ⪰ 0
/// ```
///
/// where `W = HᵀH` at binary points.
pub fn bridged_lmi_blocks(
    a_inv: &SymMatrix,
    b_inv: &SymMatrix,
    h: &Block,
    w: &SymMatrix,
    mu: f64,
    eta: f64,
) -> (SymMatrix, SymMatrix) {
    let n = a_inv.dim();
    let m = b_inv.dim();
    let hb = h.mul_sym(b_inv);
    let bwb = b_inv.matmul(&w.matmul(&b_inv.to_block())).symmetrized();
    let build = |s: f64| {
        SymMatrix::from_upper_fn(n + m, |i, j| match (i < n, j < n) {
            (true, true) => delta(i, j) + s * a_inv.get(i, j),
            (true, false) => hb.get(i, j - n),
            (false, false) => {
                let (p, q) = (i - n, j - n);
                delta(p, q) + s * b_inv.get(p, q) + bwb.get(p, q)
            }
            (false, true) => unreachable!("upper triangle only"),
        })
    };
    (build(-mu), build(eta))
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Checks both bridged LMIs at `(μ, η)` and reports their smallest eigenvalues.
pub fn certify_bridged_lmi(
    ga: &WeightedGraph,
    gb: &WeightedGraph,
    bm: &BridgeMatrix,
    mu: f64,
    eta: f64,
) -> Result<GapCertificate> {
    if bm.h().rows() != ga.n() || bm.h().cols() != gb.n() {
        return Err(Error::DimensionMismatch("bridge does not match the graphs".into()));
    }
    let b_inv = gb.inverse()?;
    if let Some((row, col)) = bm.column_violation() {
        return Err(Error::ColumnConstraintViolated { row, col });
    }
    if let Some((row, col, value)) = bridgeability_violation(&b_inv, bm.bridge_set()) {
        return Err(Error::NotBridgeable { row, col, value });
    }
    certify_with_inverses(&ga.inverse()?, &b_inv, bm.h(), mu, eta)
}

pub(crate) fn certify_with_inverses(
    a_inv: &SymMatrix,
    b_inv: &SymMatrix,
    h: &Block,
    mu: f64,
    eta: f64,
) -> Result<GapCertificate> {
    if !(mu >= 0.0 && eta >= 0.0 && mu.is_finite() && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("multipliers must be finite and nonnegative: μ = {mu}, η = {eta}")));
    }
    let w = h.transpose().matmul(h).symmetrized();
    let (upper, lower) = bridged_lmi_blocks(a_inv, b_inv, h, &w, mu, eta);
    let mut margins = Vec::with_capacity(2);
    for (k, block) in [upper, lower].iter().enumerate() {
        let margin = min_eigenvalue(block)?;
        let threshold = -MARGIN_TOL * block.scale();
        if margin < threshold {
            return Err(Error::InfeasiblePoint { block: k + 1, margin, threshold });
        }
        margins.push(margin);
    }
    Ok(GapCertificate { mu, eta, gap: mu + eta, margins })
}

/// Diagnostics for the relaxation `W ⪰ HᵀH` with the diagonal equalities
/// `W_jj = Σ_l D^A_l H_lj D^B_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    /// `max_j |Σ_l H_lj² − Σ_l D^A_l H_lj D^B_j|`.
    pub diagonal_residual: f64,
    /// `max |L|` for `L = W − HᵀH` with `W` built from the diagonal equalities.
    pub l_max_abs: f64,
    /// Cauchy–Schwarz bound `max_ij sqrt(L_ii L_jj)` on `|L_ij|` for PSD `L`.
    pub cauchy_schwarz_bound: f64,
}

pub fn relaxation_report(htilde: &Block, da: &[f64], db: &[f64]) -> Result<TightnessReport> {
    if htilde.rows() != da.len() || htilde.cols() != db.len() {
        return Err(Error::DimensionMismatch("voltage diagonals do not match H̃".into()));
    }
    for i in 0..htilde.rows() {
        for j in 0..htilde.cols() {
            let v = htilde.get(i, j);
            if v != 0.0 && v != 1.0 {
                return Err(Error::NonBinaryInput { row: i, col: j, value: v });
            }
        }
    }
    let h = htilde.diag_scaled(da, db);
    let hth = h.transpose().matmul(&h).symmetrized();
    let linear_diag: Vec<f64> =
        (0..h.cols()).map(|j| (0..h.rows()).map(|l| da[l] * h.get(l, j) * db[j]).sum()).collect();
    let diagonal_residual = (0..h.cols()).fold(0.0f64, |acc, j| acc.max((hth.get(j, j) - linear_diag[j]).abs()));

    // W: HᵀH off the diagonal, the linear expression on it.
    let w = SymMatrix::from_upper_fn(h.cols(), |i, j| if i == j { linear_diag[i] } else { hth.get(i, j) });
    let l = w.sub(&hth)?;
    Ok(TightnessReport { diagonal_residual, l_max_abs: l.max_abs(), cauchy_schwarz_bound: psd_entry_bound(&l) })
}

/// `max_ij sqrt(L_ii L_jj) = max_i L_ii`; bounds `|L_ij|` whenever `L ⪰ 0`,
/// so a PSD matrix with zero diagonal is zero.
pub fn psd_entry_bound(l: &SymMatrix) -> f64 {
    (0..l.dim()).fold(0.0f64, |acc, i| acc.max(l.get(i, i)))
}

/// True when the diagonal equalities hold to `1e-12` relative and force
/// `W = HᵀH`.
pub fn certify_relaxation_tightness(htilde: &Block, da: &[f64], db: &[f64]) -> Result<bool> {
    let r = relaxation_report(htilde, da, db)?;
    let scale = htilde.diag_scaled(da, db).max_abs().powi(2).max(1.0);
    Ok(r.diagonal_residual <= 1e-12 * scale && r.l_max_abs <= 1e-12 * scale && r.cauchy_schwarz_bound <= 1e-12 * scale)
}
