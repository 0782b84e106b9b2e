//! Conforming H¹₀ discretization on star-shaped domains.
//!
//! The mesh is a structured polar tensor grid mapped through
//! `x = s·r(θ)e^{iθ}`, split into P1 triangles with a single center node and
//! a fan around it. Radial grading resolves the bubble's concentration scale.
//! The stiffness/mass structure couples only adjacent rings, so linear
//! systems factor by a deterministic block-tridiagonal LU — no external
//! sparse solver and no ordering heuristics.

mod assemble;
mod block_tri;
mod field;
mod mesh;
mod triquad;

pub use assemble::Csr;
pub use block_tri::BlockTriFactor;
pub use field::Field;
pub use mesh::{Discretization, Resolution};

/// Outcome of a direct linear solve.
#[derive(Debug, Clone)]
pub struct LinearSolveReport {
    /// ℓ² norm of the algebraic residual after refinement.
    pub residual_norm: f64,
    /// Smallest pivot magnitude seen across the block factorization.
    pub smallest_pivot: f64,
    /// Iterative refinement passes applied.
    pub refinement_passes: usize,
}
