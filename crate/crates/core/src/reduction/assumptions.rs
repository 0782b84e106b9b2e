//! Which existence theorem, if any, covers the supplied data.
//!
//! The `α ≥ 3` case needs the gradient balance
//! `∇a(0) + 4π(N+2) a(0) ∇ₓH(0,0) = 0` together with `A ≠ 0`, where
//! `A = 4π²(α+1)²|dH̃/dx(0,0)|² - Δa(0)/(4a(0))`. The `α = 2` case instead
//! needs an ℓ-symmetric domain (ℓ ≥ 3) and `∇a(0) = 0`, `Δa(0) ≠ 0`,
//! `a₁₁ = a₂₂` — the symmetry kills the low derivatives of `H̃`, so the same
//! `A` reduces to `-Δa(0)/(4a(0))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Error;
use crate::geometry::{DomainModel, KernelData};
use crate::potential::PotentialModel;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCase {
    Thm1,
    Thm2,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub theorem_case: TheoremCase,
    /// `|∇a(0) + 4π(N+2) a(0) ∇ₓH(0,0)|`.
    pub gradient_condition_residual: f64,
    pub a_value: f64,
    pub symmetry_ok: bool,
    pub alpha: u32,
}

const GRAD_TOL: f64 = 1e-8;
const A_TOL: f64 = 1e-10;

pub fn check_assumptions(
    pot: &PotentialModel,
    kd: &KernelData,
    domain: &DomainModel,
    n_vortex: u32,
) -> Result<AssumptionReport> {
    if n_vortex < 1 {
        return Err(Error::invalid("N must be a positive integer"));
    }
    let alpha = n_vortex + 1;
    if kd.alpha != alpha {
        return Err(Error::invalid(format!(
            "kernel data extracted for alpha = {}, problem has alpha = {alpha}",
            kd.alpha
        )));
    }
    let a = alpha as f64;
    let a0 = pot.a0();
    let grad_a = pot.grad0();
    // grad_h00 stores ∂₁H - i∂₂H of x ↦ H(x,0).
    let grad_h = [kd.grad_h00.re, -kd.grad_h00.im];
    let factor = 4.0 * PI * (n_vortex as f64 + 2.0) * a0;
    let gradient_condition_residual = ((grad_a[0] + factor * grad_h[0]).powi(2)
        + (grad_a[1] + factor * grad_h[1]).powi(2))
    .sqrt();

    let a_value = 4.0 * PI * PI * (a + 1.0) * (a + 1.0) * kd.grad_h00.norm_sqr()
        - pot.laplacian0() / (4.0 * a0);

    // ℓ ≥ 3 symmetry: take the declared order when present, otherwise probe 3.
    let ell = domain.symmetry_order.unwrap_or(3).max(3);
    let symmetry_ok = domain.symmetry_check(ell);

    let grad_a_norm = (grad_a[0] * grad_a[0] + grad_a[1] * grad_a[1]).sqrt();
    let theorem_case = if alpha >= 3
        && gradient_condition_residual <= GRAD_TOL
        && a_value.abs() > A_TOL
    {
        TheoremCase::Thm1
    } else if alpha == 2
        && symmetry_ok
        && grad_a_norm <= GRAD_TOL
        && pot.laplacian0().abs() > A_TOL
        && (pot.spec.a11 - pot.spec.a22).abs() <= GRAD_TOL
    {
        TheoremCase::Thm2
    } else {
        TheoremCase::None
    };

    Ok(AssumptionReport {
        theorem_case,
        gradient_condition_residual,
        a_value,
        symmetry_ok,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{holomorphic_derivatives, GreensFunction};

    #[test]
    fn disk_quadratic_is_thm1() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let kd = holomorphic_derivatives(&gf, 3, 3).unwrap();
        let pot = PotentialModel::one_plus_half_r2();
        let r = check_assumptions(&pot, &kd, &gf.domain, 2).unwrap();
        assert_eq!(r.theorem_case, TheoremCase::Thm1);
        assert!((r.a_value + 0.5).abs() < 1e-12, "A = {}", r.a_value);
        assert!(r.gradient_condition_residual < 1e-12);
    }

    #[test]
    fn constant_potential_is_none() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let kd = holomorphic_derivatives(&gf, 3, 3).unwrap();
        let pot = PotentialModel::constant_one();
        let r = check_assumptions(&pot, &kd, &gf.domain, 2).unwrap();
        assert_eq!(r.theorem_case, TheoremCase::None);
        assert_eq!(r.a_value, 0.0);
    }

    #[test]
    fn flower_alpha2_is_thm2() {
        let dom = DomainModel::flower(3, 0.1);
        let gf = GreensFunction::new(dom).unwrap();
        let kd = holomorphic_derivatives(&gf, 3, 2).unwrap();
        let pot = PotentialModel::one_plus_half_r2();
        let r = check_assumptions(&pot, &kd, &gf.domain, 1).unwrap();
        assert_eq!(r.theorem_case, TheoremCase::Thm2);
        assert!(r.symmetry_ok);
    }

    #[test]
    fn a_computed_even_when_case_none() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let kd = holomorphic_derivatives(&gf, 3, 2).unwrap();
        // Gradient condition violated: ∇a(0) ≠ 0 on a symmetric domain.
        let pot = PotentialModel::quadratic(1.0, [0.3, 0.0], 1.0, 1.0);
        let r = check_assumptions(&pot, &kd, &gf.domain, 1).unwrap();
        assert_eq!(r.theorem_case, TheoremCase::None);
        assert!((r.a_value + 0.5).abs() < 1e-12);
        assert!(r.gradient_condition_residual > 0.29);
    }
}
