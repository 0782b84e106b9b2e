//! Domain models with Dirichlet Green's function, regular part, and the
//! derivative data of the regular part's holomorphic extension at the origin.

mod domain;
mod harmonic;
mod holo;
mod kernels;
mod roots;

pub use domain::{DomainKind, DomainModel};
pub use harmonic::HarmonicFn;
pub use holo::{holomorphic_derivatives, KernelData};
pub use kernels::GreensFunction;
pub use roots::{roots_of_b, sum_over_roots_expansion_check};
