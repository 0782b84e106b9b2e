//! The finite-dimensional layer: theorem-hypothesis checks, the constant `A`,
//! the reduced map `F` with its Jacobian, the moment expansions of the
//! multiplier system, and the root-find in the shift parameter `b`.

mod assumptions;
mod moments;
mod multiplier;
mod reduced_map;
mod solve_b;

pub use assumptions::{check_assumptions, AssumptionReport, TheoremCase};
pub use moments::{moment_integral, quadratic_moment_integral};
pub use multiplier::multiplier_leading_form;
pub use reduced_map::{jacobian_at_zero, reduced_map_f, ReducedMapValue};
pub use solve_b::{scan_multipliers, solve_for_b, BRootConfig, BRootReport, MultiplierEval};
