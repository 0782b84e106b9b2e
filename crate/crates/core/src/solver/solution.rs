//! Assembly of the solution `u = PW + φ - 4π(α-1)G(·,0)` and its
//! concentration diagnostics.
//!
//! The singular part is kept symbolic: the stored field is `v = PW + φ`
//! (regular, zero trace) and evaluations of `u` subtract the Green's term in
//! closed form. The diagnostics are the paper's observables:
//!
//! * total mass `λ∫ a e^u = λ∫ V|x|^{2(α-1)} e^v → 8πα`,
//! * local mass over a small ball around the origin,
//! * far-field error `max_{|x|=ρ₀} |u - 4π(N+2)G(x,0)| = |v - 8πα G|`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::bubble::{potential_v, ProjectedBubble};
use crate::discretization::{Discretization, Field};
use crate::geometry::GreensFunction;
use crate::potential::PotentialModel;
use crate::Result;

use super::contraction::ReducedState;

#[derive(Debug, Clone, serde::Serialize)]
pub struct SolutionDiagnostics {
    pub mass: f64,
    pub local_mass: f64,
    pub local_radius: f64,
    pub farfield_error: f64,
    pub farfield_radius: f64,
    /// Energy `J(v) = ½∫|∇v|² - λ∫V|x|^{2(α-1)}e^v`.
    pub energy: f64,
}

pub fn assemble_solution(
    state: &ReducedState,
    disc: &Arc<Discretization>,
    proj: &ProjectedBubble,
    gf: &GreensFunction,
    pot: &PotentialModel,
) -> Result<(Field, SolutionDiagnostics)> {
    let alpha = proj.params.alpha;
    let lambda = state.lambda;

    // Regular part v = PW + φ as a nodal field.
    let mut v = Field::interpolate_h10(disc, |z| proj.pw(z));
    v.axpy(1.0, &state.phi);

    // Mass density λV|x|^{2(α-1)}e^{PW+φ} = m(x)·e^{φ}.
    let density = |x: Complex64, p: f64| {
        let vv = potential_v(pot, gf, alpha, x).unwrap_or(f64::NAN);
        let s = lambda.ln() + vv.ln() - proj.e_w_at(x);
        proj.params.weight(x) * s.exp() * p.exp()
    };
    let mass = disc.integrate_with_field(&state.phi, &density);

    let local_radius = 0.25 * gf.domain.inradius();
    let local_mass = disc.integrate_with_field(&state.phi, &|x, p| {
        if x.norm() <= local_radius {
            density(x, p)
        } else {
            0.0
        }
    });

    // Far-field error on the circle |x| = ρ₀.
    let farfield_radius = 0.5 * gf.domain.inradius();
    let zero = Complex64::new(0.0, 0.0);
    let mut farfield_error = 0.0f64;
    for k in 0..64 {
        let th = std::f64::consts::TAU * (k as f64 + 0.31) / 64.0;
        let x = Complex64::from_polar(farfield_radius, th);
        let vx = proj.pw(x) + state.phi.eval(x);
        let g = gf.green(x, zero)?;
        farfield_error = farfield_error
            .max((vx - 8.0 * std::f64::consts::PI * alpha as f64 * g).abs());
    }

    let energy = 0.5 * disc.h1_inner(&v, &v)? - mass;

    Ok((
        v,
        SolutionDiagnostics {
            mass,
            local_mass,
            local_radius,
            farfield_error,
            farfield_radius,
            energy,
        },
    ))
}
