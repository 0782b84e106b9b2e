//! Leading form of the projected residual tested against the kernels.
//!
//! For data satisfying the theorem hypotheses,
//!
//! ```text
//!   ∫∇PW·∇PZ^j - λ∫V|x|^{2(α-1)}e^{PW}PZ^j
//!       = 8α²·A·δ²·F_j(δ^{-α}b) + O(δ³) + O(δ²|b|) + O(δ|b|²),
//! ```
//!
//! with `A = 4π²(α+1)²|dH̃/dx(0,0)|² - Δa(0)/(4a(0))`. The prefactor `8α²`
//! is the rescaled bubble mass that the corollary chain attaches to the
//! reduced map; the module tests verify it against the `F` oracle.
//!
//! Since `-ΔPW = |x|^{2(α-1)}e^{W}` and `PZ^j` vanishes on ∂Ω, the left side
//! collapses to the single area integral `∫ w·(1 - λVe^{-E_W})·PZ^j`, which
//! is evaluated by adaptive quadrature at full precision.

use num_complex::Complex64;

use crate::bubble::{potential_v, ProjectedBubble};
use crate::geometry::GreensFunction;
use crate::potential::PotentialModel;
use crate::quadrature::{integrate_star, knots_for_scale, StarQuadOptions};
use crate::reduction::reduced_map_f;
use crate::Result;

pub struct MultiplierForm {
    pub computed: f64,
    pub model: f64,
}

pub fn multiplier_leading_form(
    proj: &ProjectedBubble,
    gf: &GreensFunction,
    pot: &PotentialModel,
    lambda: f64,
    j: usize,
    a_value: f64,
    tol: f64,
) -> Result<MultiplierForm> {
    let alpha = proj.params.alpha;
    let delta = proj.params.delta;
    let opts = StarQuadOptions {
        tol,
        max_panels: 200_000,
        radial_knots: Some(knots_for_scale(delta / gf.domain.inradius())),
    };
    let q = integrate_star(
        |th| gf.domain.radius_at(th),
        |x, y| {
            let z = Complex64::new(x, y);
            let v = potential_v(pot, gf, alpha, z).unwrap_or(f64::NAN);
            let s = lambda.ln() + v.ln() - proj.e_w_at(z);
            -proj.params.weight(z) * s.exp_m1() * proj.pz(j, z)
        },
        &opts,
    )?;

    let bshift = proj.params.b / delta.powi(alpha as i32);
    let f = reduced_map_f(bshift, alpha, 1e-10, false)?.f;
    let model =
        8.0 * (alpha * alpha) as f64 * a_value * delta * delta * f[j.saturating_sub(1).min(1)];

    Ok(MultiplierForm {
        computed: q.value,
        model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubble::{delta_from_lambda, BubbleParams};
    use crate::geometry::DomainModel;
    use crate::util::loglog_slope;

    struct Setup {
        gf: GreensFunction,
        pot: PotentialModel,
    }

    fn disk_setup() -> Setup {
        Setup {
            gf: GreensFunction::new(DomainModel::unit_disk()).unwrap(),
            pot: PotentialModel::one_plus_half_r2(),
        }
    }

    fn lambda_for_delta(s: &Setup, alpha: u32, delta: f64) -> f64 {
        // Invert the δ-rule at b = 0 (V(0) = 1, H ≡ 0 on the disk).
        let a = alpha as f64;
        let _ = s;
        8.0 * a * a * delta.powi(2 * alpha as i32)
    }

    #[test]
    fn vanishes_exactly_for_radial_data() {
        // Fully rotationally symmetric data: the form is identically zero,
        // far below the generic O(δ³) bound.
        let s = disk_setup();
        let alpha = 3u32;
        let d = 0.1;
        let lambda = lambda_for_delta(&s, alpha, d);
        let params = BubbleParams::new(alpha, d, Complex64::new(0.0, 0.0)).unwrap();
        let proj = ProjectedBubble::new(&s.gf, params).unwrap();
        let mf = multiplier_leading_form(&proj, &s.gf, &s.pot, lambda, 1, -0.5, 1e-12).unwrap();
        assert!(mf.computed.abs() < 1e-11, "radial case {}", mf.computed);
        assert!(mf.model.abs() < 1e-14);
    }

    #[test]
    fn cubic_order_for_b_zero_generic_potential() {
        // b = 0 ⇒ model = 0; computed = O(δ³). The cubic order is generic
        // only when the data has a live third-order term, so add one to the
        // potential: a = 1 + |x|²/2 + 0.15·x₁³ (still Theorem-1 data at 0).
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let spec = crate::potential::PotentialSpec {
            a0: 1.0,
            grad: [0.0, 0.0],
            a11: 1.0,
            a22: 1.0,
            profile: crate::potential::PotentialProfile::Expr {
                expr: "1 + 0.5*(x1^2 + x2^2) + 0.15*x1^3".into(),
            },
        };
        let pot = PotentialModel::new(spec, &gf.domain).unwrap();
        let alpha = 3u32;
        let deltas = [0.2f64, 0.14, 0.1];
        let vals: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                let lambda =
                    8.0 * (alpha * alpha) as f64 * d.powi(2 * alpha as i32) / pot.a0();
                let dd =
                    delta_from_lambda(lambda, Complex64::new(0.0, 0.0), &pot, &gf, alpha)
                        .unwrap();
                let params = BubbleParams::new(alpha, dd, Complex64::new(0.0, 0.0)).unwrap();
                let proj = ProjectedBubble::new(&gf, params).unwrap();
                multiplier_leading_form(&proj, &gf, &pot, lambda, 1, -0.5, 1e-12)
                    .unwrap()
                    .computed
                    .abs()
            })
            .collect();
        let slope = loglog_slope(&deltas, &vals, 1e-14).unwrap();
        assert!((slope - 3.0).abs() < 0.3, "slope {slope}, values {vals:?}");
    }

    #[test]
    fn matches_model_with_shift() {
        // b = δ^α·B: computed/δ² → 8α²·A·F_j(B), A = -1/2 for this data.
        let s = disk_setup();
        let alpha = 3u32;
        let bshift = Complex64::new(0.5, 0.0);
        let deltas = [0.15f64, 0.1, 0.07];
        let mut errs = Vec::new();
        for &d in &deltas {
            let b = bshift * d.powi(alpha as i32);
            let lambda = lambda_for_delta(&s, alpha, d);
            let dd = delta_from_lambda(lambda, b, &s.pot, &s.gf, alpha).unwrap();
            let params = BubbleParams::new(alpha, dd, b).unwrap();
            let proj = ProjectedBubble::new(&s.gf, params).unwrap();
            let mf =
                multiplier_leading_form(&proj, &s.gf, &s.pot, lambda, 1, -0.5, 1e-11).unwrap();
            errs.push((mf.computed - mf.model).abs() / (d * d));
            // The two agree to relative O(δ) at leading order.
            assert!(
                (mf.computed - mf.model).abs() < 1.2 * d * mf.model.abs(),
                "δ={d}: computed {} vs model {}",
                mf.computed,
                mf.model
            );
        }
        // The δ²-normalized gap shrinks like δ.
        assert!(errs[2] < errs[0], "normalized gaps {errs:?}");
    }

    #[test]
    fn model_is_odd_in_b_at_leading_order() {
        let s = disk_setup();
        let alpha = 3u32;
        let d = 0.1;
        let lambda = lambda_for_delta(&s, alpha, d);
        let mut vals = Vec::new();
        for sign in [1.0f64, -1.0] {
            let b = Complex64::new(0.5 * sign, 0.0) * d.powi(alpha as i32);
            let dd = delta_from_lambda(lambda, b, &s.pot, &s.gf, alpha).unwrap();
            let params = BubbleParams::new(alpha, dd, b).unwrap();
            let proj = ProjectedBubble::new(&s.gf, params).unwrap();
            let mf =
                multiplier_leading_form(&proj, &s.gf, &s.pot, lambda, 1, -0.5, 1e-11).unwrap();
            vals.push(mf);
        }
        // Flipping b flips the model exactly and the computed value to
        // within the remainder.
        assert!((vals[0].model + vals[1].model).abs() < 1e-12);
        let sum = vals[0].computed + vals[1].computed;
        assert!(
            sum.abs() < 0.5 * d * vals[0].model.abs().max(1e-12),
            "odd-symmetry defect {sum}"
        );
    }
}
