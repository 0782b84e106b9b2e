//! Numerical construction and verification of blowing-up solutions for the
//! singular Liouville boundary-value problem
//!
//! ```text
//!   -Δu = λ a(x) e^u - 4πN δ₀   in Ω,      u = 0   on ∂Ω,
//! ```
//!
//! on a smooth bounded planar domain with the source at the origin. After the
//! change of variables `v = u + 4π(α-1)G(x,0)`, `α = N+1`, the problem becomes
//! the regular equation `-Δv = λ V(x)|x|^{2(α-1)} e^v` and the solver pipeline
//! runs the classical reduction scheme as an executable algorithm:
//!
//! 1. bubble ansatz `W` with scale `δ(λ,b)` and complex shift `b`,
//! 2. zero-trace projections `PW`, `PZ^j` of the ansatz and its kernels,
//! 3. constrained linearized solves and a contraction for the remainder `φ`,
//! 4. a finite-dimensional root-find in `b` driving the multipliers to zero.
//!
//! Every closed-form integral identity the construction relies on is checked
//! independently by adaptive quadrature (see [`quadrature`] and [`reduction`]).

pub mod bubble;
pub mod discretization;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod potential;
pub mod quadrature;
pub mod reduction;
pub mod solver;
pub mod util;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
