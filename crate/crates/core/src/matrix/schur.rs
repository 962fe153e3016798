//! Block matrices `C = [[A, H], [Hᵀ, B]]` and their inversion through the
//! Schur complement `S = A − H B⁻¹ Hᵀ`.

use super::{invert, Block, SymMatrix};
use crate::error::{Error, Result};

fn check_dims(a: &SymMatrix, b: &SymMatrix, h: &Block) -> Result<()> {
    if h.rows() != a.dim() || h.cols() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, expected {}x{}",
            h.rows(),
            h.cols(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `[[A, H], [Hᵀ, B]]`.
pub fn assemble(a: &SymMatrix, b: &SymMatrix, h: &Block) -> Result<SymMatrix> {
    check_dims(a, b, h)?;
    let n = a.dim();
    Ok(SymMatrix::from_upper_fn(n + b.dim(), |i, j| match (i < n, j < n) {
        (true, true) => a.get(i, j),
        (true, false) => h.get(i, j - n),
        (false, false) => b.get(i - n, j - n),
        (false, true) => unreachable!("upper triangle only"),
    }))
}

/// Assembles a symmetric matrix from its upper-left, upper-right and
/// lower-right blocks.
pub(crate) fn from_blocks(ul: &Block, ur: &Block, lr: &Block) -> SymMatrix {
    let n = ul.rows();
    SymMatrix::from_upper_fn(n + lr.rows(), |i, j| match (i < n, j < n) {
        (true, true) => 0.5 * (ul.get(i, j) + ul.get(j, i)),
        (true, false) => ur.get(i, j - n),
        (false, false) => 0.5 * (lr.get(i - n, j - n) + lr.get(j - n, i - n)),
        (false, true) => unreachable!("upper triangle only"),
    })
}

/// `A − H B⁻¹ Hᵀ`.
pub fn schur_complement(a: &SymMatrix, b: &SymMatrix, h: &Block) -> Result<SymMatrix> {
    check_dims(a, b, h)?;
    let b_inv = invert(b)?;
    let hbh = h.mul_sym(&b_inv).matmul(&h.transpose()).symmetrized();
    a.sub(&hbh)
}

/// Inverse of `[[A, H], [Hᵀ, B]]` from the blocks
/// `S⁻¹, −S⁻¹HB⁻¹, B⁻¹ + B⁻¹HᵀS⁻¹HB⁻¹`.
pub fn block_inverse(a: &SymMatrix, b: &SymMatrix, h: &Block) -> Result<SymMatrix> {
    check_dims(a, b, h)?;
    let b_inv = invert(b)?;
    let hb = h.mul_sym(&b_inv); // H B⁻¹
    let s = a.sub(&hb.matmul(&h.transpose()).symmetrized())?;
    let s_inv = invert(&s)?;
    let upper_right = s_inv.matmul(&hb).scaled(-1.0);
    let lower_right = b_inv.to_block().add(&hb.transpose().mul_sym(&s_inv).matmul(&hb));
    Ok(from_blocks(&s_inv.to_block(), &upper_right, &lower_right))
}

/// `Q = [[I, −HB⁻¹], [0, I]]`, so that `C⁻¹ = Qᵀ diag(S⁻¹, B⁻¹) Q`.
pub fn congruence_q(h: &Block, b_inv: &SymMatrix) -> Block {
    unit_upper(&h.mul_sym(b_inv).scaled(-1.0))
}

/// `Z = Q⁻¹ = [[I, HB⁻¹], [0, I]]`.
pub fn congruence_z(h: &Block, b_inv: &SymMatrix) -> Block {
    unit_upper(&h.mul_sym(b_inv))
}

fn unit_upper(x: &Block) -> Block {
    let (n, m) = (x.rows(), x.cols());
    Block::from_fn(n + m, n + m, |i, j| {
        if i == j {
            1.0
        } else if i < n && j >= n {
            x.get(i, j - n)
        } else {
            0.0
        }
    })
}
