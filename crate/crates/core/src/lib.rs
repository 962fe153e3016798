//! HOMO-LUMO spectral gap of weighted graphs and exact maximization of the
//! gap over bipartite bridges between two voltage graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`] dense symmetric linear algebra (Jacobi eigensolver, inversion,
//!   Löwner order, Schur-complement block inversion),
//! * [`graph`] weighted and voltage graphs, spectra, HOMO/LUMO quantities and
//!   the builtin molecule graphs,
//! * [`bridge`] bridged graphs `C = [[A, H], [Hᵀ, B]]` and their inverse,
//! * [`sdp`] the semidefinite representation of the gap and its certificates,
//! * [`optimizer`] the exact mixed-integer search over binary bridges,
//! * [`format`] graph/bridge JSON and DOT export,
//! * [`table2`] the reference fulvene/benzene bridging experiments.

#![allow(clippy::needless_range_loop)]

pub mod bridge;
pub mod error;
pub mod format;
pub mod graph;
pub mod matrix;
pub mod optimizer;
pub mod sdp;
pub mod table2;

pub use error::{Error, Result};
