//! Adaptive integration over ℝ² and over star-shaped domains, plus the
//! canonical closed-form identity suite.
//!
//! All whole-plane integrals of the construction have integrands that are
//! smooth away from the origin with known algebraic decay, so the scheme is a
//! polar decomposition into panels with tensor Gauss–Kronrod rules, adaptive
//! bisection driven by the embedded error estimate, and an analytic tail
//! correction beyond a truncation radius chosen from the decay power.
//!
//! Refinement order is a fixed worst-error-first queue with index tie-break
//! and the final reduction is a pairwise tree over panels in creation order,
//! so results are reproducible bit-for-bit for a fixed tolerance.

mod adaptive2d;
mod gk;
mod identities;
mod plane;
mod radial;
mod star;

pub use identities::{
    canonical_identities, change_of_variables_check, vanishing_moment_check, IdentityReport,
    TestFunction,
};
pub use plane::integrate_plane;
pub use radial::integrate_radial;
pub use star::{integrate_star, knots_for_scale, StarQuadOptions};

use crate::error::Error;
use crate::Result;

/// How an integrand behaves at infinity and at the origin.
///
/// `power` is the algebraic decay exponent: `|f(y)| ≤ C(1+|y|)^{-power}`.
/// Integrability over the plane requires `power > 2`. `singular_origin`
/// requests graded radial panels near 0 for integrands with a fractional
/// `|y|^s` factor whose derivatives blow up there.
#[derive(Debug, Clone, Copy)]
pub struct DecayProfile {
    pub power: f64,
    pub singular_origin: bool,
}

impl DecayProfile {
    pub fn new(power: f64) -> Result<Self> {
        if !(power > 2.0) {
            return Err(Error::invalid(format!(
                "decay power must exceed 2 for integrability, got {power}"
            )));
        }
        Ok(DecayProfile {
            power,
            singular_origin: false,
        })
    }

    pub fn with_singular_origin(mut self) -> Self {
        self.singular_origin = true;
        self
    }
}

/// Value of an adaptive integral together with its a-posteriori error
/// estimate and the number of panels used.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
}
