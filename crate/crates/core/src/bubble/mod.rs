//! The explicit ansatz layer: the bubble `W`, its zero-trace projection `PW`,
//! the linearization kernels `Z⁰,Z¹,Z²` with projections, the potential `V`,
//! the `δ(λ,b)` rule, and the pointwise residual `R_λ`.

mod ansatz;
mod projection;
mod residual;

pub use ansatz::{delta_from_lambda, potential_v, BubbleParams};
pub use projection::{sample_points, ProjectedBubble};
pub use residual::ResidualField;
