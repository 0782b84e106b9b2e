//! Adaptive integration over a star-shaped domain `{ρ < r(θ)}`.
//!
//! The domain is pulled back to the reference rectangle `(t,θ) ∈ [0,1]×[0,2π]`
//! through `x = t·r(θ)e^{iθ}` with Jacobian `t·r(θ)²`, and the same panel
//! engine as the whole-plane path drives the refinement. Concentration scales
//! near the origin can be seeded through `radial_knots`.

use std::f64::consts::{PI, TAU};

use super::adaptive2d::{adaptive_rectangle, AdaptiveOptions};
use super::QuadratureResult;
use crate::Result;

pub struct StarQuadOptions {
    pub tol: f64,
    pub max_panels: usize,
    /// Initial knots on the normalized radius in `[0,1]`; `{0,…,1}` graded
    /// 12 levels deep when absent.
    pub radial_knots: Option<Vec<f64>>,
}

impl Default for StarQuadOptions {
    fn default() -> Self {
        StarQuadOptions {
            tol: 1e-10,
            max_panels: 120_000,
            radial_knots: None,
        }
    }
}

/// Knots on `[0,1]` graded geometrically into `scale` (clamped), for seeding
/// bubble-scale features at distance `scale` from the origin.
pub fn knots_for_scale(scale: f64) -> Vec<f64> {
    let s = scale.clamp(1e-6, 0.25);
    let mut ks = vec![0.0];
    let mut r = s / 8.0;
    while r < 0.999 {
        ks.push(r);
        r *= 2.0;
    }
    ks.push(1.0);
    ks
}

/// Integrate `f(x₁,x₂)` over the star-shaped domain with boundary `ρ = r(θ)`.
pub fn integrate_star(
    radius: impl Fn(f64) -> f64 + Copy,
    f: impl FnMut(f64, f64) -> f64,
    opts: &StarQuadOptions,
) -> Result<QuadratureResult> {
    let u_knots = opts
        .radial_knots
        .clone()
        .unwrap_or_else(|| knots_for_scale(0.1));
    let v_knots: Vec<f64> = (0..=8).map(|j| TAU * j as f64 / 8.0).collect();
    let mut g = f;
    let opts2 = AdaptiveOptions {
        tol: opts.tol,
        max_panels: opts.max_panels,
        u_knots,
        v_knots,
        extent: Box::new(move |u0, u1, v0, v1| {
            let rm = radius(0.5 * (v0 + v1));
            ((u1 - u0) * rm, 0.5 * (u0 + u1).max(u1 - u0) * rm * (v1 - v0) / PI)
        }),
    };
    let (value, error, cells) = adaptive_rectangle(
        move |t, th| {
            let r = radius(th);
            let rho = t * r;
            t * r * r * g(rho * th.cos(), rho * th.sin())
        },
        &opts2,
    )?;
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        cells_used: cells,
    })
}
