//! The Lyapunov–Schmidt engine: constrained linearized solves, the
//! contraction for the remainder `φ`, solution assembly, and λ-continuation.

mod contraction;
mod continuation;
mod linearized;
mod solution;

pub use contraction::{contraction_solve, nonlinear_remainder, ContractionConfig, ReducedState};
pub use continuation::{continuation, ContinuationConfig, ContinuationRow, ConvergenceReport};
pub use linearized::{LinearizedSolution, LinearizedSystem};
pub use solution::{assemble_solution, SolutionDiagnostics};
