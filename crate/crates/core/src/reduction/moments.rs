//! Moment integrals of the projected kernels against the concentrating
//! weight — the expansion currency of the multiplier system.
//!
//! Writing `w = |x|^{2(α-1)}e^{W}` and changing variables through `y ↦ y^α`
//! (Lemma-copy style), the γ = α moments have the closed leading form
//!
//! ```text
//!   ∫ w·PZ¹·Re(ξx^α) = 2πα δ^α Re(ξ) + O(δ^{2α})     (Im: +2πα δ^α Im ξ)
//!   ∫ w·PZ²·Re(ξx^α) = -2πα δ^α Im(ξ) + O(δ^{2α})    (Im: +2πα δ^α Re ξ)
//! ```
//!
//! and the γ < α moments are `O(δ^{α+γ})`. The leading scalar follows from
//! `8α²δ^α·(1/α)·∫ y₁²(1+|y|²)^{-3} dy = 8αδ^α·(π/4) = 2παδ^α`; the module
//! tests pin it against adaptive quadrature.

use num_complex::Complex64;

use crate::bubble::ProjectedBubble;
use crate::error::Error;
use crate::geometry::GreensFunction;
use crate::quadrature::{integrate_star, knots_for_scale, StarQuadOptions};
use crate::Result;

fn star_opts(proj: &ProjectedBubble, gf: &GreensFunction, tol: f64) -> StarQuadOptions {
    StarQuadOptions {
        tol,
        max_panels: 200_000,
        radial_knots: Some(knots_for_scale(
            proj.params.delta / gf.domain.inradius(),
        )),
    }
}

/// `∫_Ω |x|^{2(α-1)} e^{W} PZ^j Re(ξ x^γ) dx` (use `ξ ↦ -iξ` for the
/// Im-moment).
pub fn moment_integral(
    proj: &ProjectedBubble,
    gf: &GreensFunction,
    j: usize,
    gamma: u32,
    xi: Complex64,
    tol: f64,
) -> Result<f64> {
    if j > 2 {
        return Err(Error::invalid("kernel index must be 0, 1 or 2"));
    }
    if gamma > proj.params.alpha {
        return Err(Error::invalid("gamma must lie in 0..=alpha"));
    }
    let q = integrate_star(
        |th| gf.domain.radius_at(th),
        |x, y| {
            let z = Complex64::new(x, y);
            proj.params.weight(z) * proj.pz(j, z) * (xi * z.powu(gamma)).re
        },
        &star_opts(proj, gf, tol),
    )?;
    Ok(q.value)
}

/// `∫_Ω |x|^{2(α-1)} e^{W} PZ^j · m(ξ₁x) m(ξ₂x) dx` with `m = Re` or `m = Im`.
pub fn quadratic_moment_integral(
    proj: &ProjectedBubble,
    gf: &GreensFunction,
    j: usize,
    xi1: Complex64,
    xi2: Complex64,
    imaginary_parts: bool,
    tol: f64,
) -> Result<f64> {
    if j > 2 {
        return Err(Error::invalid("kernel index must be 0, 1 or 2"));
    }
    let q = integrate_star(
        |th| gf.domain.radius_at(th),
        |x, y| {
            let z = Complex64::new(x, y);
            let (m1, m2) = if imaginary_parts {
                ((xi1 * z).im, (xi2 * z).im)
            } else {
                ((xi1 * z).re, (xi2 * z).re)
            };
            proj.params.weight(z) * proj.pz(j, z) * m1 * m2
        },
        &star_opts(proj, gf, tol),
    )?;
    Ok(q.value)
}
