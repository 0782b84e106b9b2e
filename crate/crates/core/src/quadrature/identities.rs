//! The closed-form integral identity suite behind the reduction scheme.
//!
//! The three kernel identities evaluate, for any shift ξ,
//! ```text
//!   id1 = ∫ |y|^{2(α-1)} log(1+|y^α-ξ|²) (1-|y^α-ξ|²)/(1+|y^α-ξ|²)³ dy = -π/(2α)
//!   id2 = ∫ |y|^{2(α-1)} (1-|y^α-ξ|²)/(1+|y^α-ξ|²)³ dy                =  0
//!   id3 = ∫ |y|^{2(α-1)} (Re(y^α-ξ))²/(1+|y^α-ξ|²)⁴ dy               =  π/(12α)
//! ```
//! together with the bubble mass `∫ |y|^{2(α-1)} e^{w} dy = 8πα`. The shifted
//! integrands are evaluated directly; their ξ-independence is a test, not an
//! assumption.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{integrate_plane, DecayProfile, QuadratureResult};
use crate::error::Error;
use crate::Result;

/// Values of the identity suite at one `(α, ξ)`.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    pub alpha: u32,
    pub xi: Complex64,
    pub id1: f64,
    pub id2: f64,
    pub id3: f64,
    /// The Im-companion of id3; equals id3 in exact arithmetic.
    pub id3_im: f64,
    pub quantization: f64,
    /// Worst quadrature error estimate among the five integrals.
    pub max_error_estimate: f64,
}

impl IdentityReport {
    pub fn id1_expected(alpha: u32) -> f64 {
        -PI / (2.0 * alpha as f64)
    }
    pub fn id3_expected(alpha: u32) -> f64 {
        PI / (12.0 * alpha as f64)
    }
    pub fn quantization_expected(alpha: u32) -> f64 {
        8.0 * PI * alpha as f64
    }
}

fn shifted(alpha: u32, xi: Complex64, x: f64, y: f64) -> (f64, f64) {
    let z = Complex64::new(x, y);
    let w = z.powu(alpha) - xi;
    (w.norm_sqr(), (x * x + y * y).powi(alpha as i32 - 1))
}

/// Evaluate the identity suite for integer `alpha ≥ 1` and shift `xi`.
pub fn canonical_identities(alpha: u32, xi: Complex64, tol: f64) -> Result<IdentityReport> {
    if alpha < 1 {
        return Err(Error::invalid("alpha must be a positive integer"));
    }
    let a = alpha as f64;

    let run = |f: &dyn Fn(f64, f64) -> f64, power: f64| -> Result<QuadratureResult> {
        integrate_plane(f, DecayProfile::new(power)?, tol)
    };

    let q1 = run(
        &|x, y| {
            let (t, w) = shifted(alpha, xi, x, y);
            w * (1.0 + t).ln() * (1.0 - t) / (1.0 + t).powi(3)
        },
        2.0 * a + 1.0,
    )?;
    let q2 = run(
        &|x, y| {
            let (t, w) = shifted(alpha, xi, x, y);
            w * (1.0 - t) / (1.0 + t).powi(3)
        },
        2.0 * a + 2.0,
    )?;
    let q3 = run(
        &|x, y| {
            let z = Complex64::new(x, y);
            let w = z.powu(alpha) - xi;
            let t = w.norm_sqr();
            (x * x + y * y).powi(alpha as i32 - 1) * w.re * w.re / (1.0 + t).powi(4)
        },
        4.0 * a + 2.0,
    )?;
    let q3i = run(
        &|x, y| {
            let z = Complex64::new(x, y);
            let w = z.powu(alpha) - xi;
            let t = w.norm_sqr();
            (x * x + y * y).powi(alpha as i32 - 1) * w.im * w.im / (1.0 + t).powi(4)
        },
        4.0 * a + 2.0,
    )?;
    let qm = run(
        &|x, y| {
            let (t, w) = shifted(alpha, xi, x, y);
            w * 8.0 * a * a / (1.0 + t).powi(2)
        },
        2.0 * a + 2.0,
    )?;

    let max_err = [q1, q2, q3, q3i, qm]
        .iter()
        .map(|q| q.error_estimate)
        .fold(0.0, f64::max);

    Ok(IdentityReport {
        alpha,
        xi,
        id1: q1.value,
        id2: q2.value,
        id3: q3.value,
        id3_im: q3i.value,
        quantization: qm.value,
        max_error_estimate: max_err,
    })
}

/// A scalar test integrand on the plane with a declared decay profile.
pub struct TestFunction {
    pub eval: Box<dyn Fn(Complex64) -> f64>,
    pub decay: DecayProfile,
}

impl TestFunction {
    pub fn gaussian() -> Self {
        TestFunction {
            eval: Box::new(|w| (-w.norm_sqr()).exp()),
            decay: DecayProfile {
                power: 12.0,
                singular_origin: false,
            },
        }
    }

    pub fn rational_cubed() -> Self {
        TestFunction {
            eval: Box::new(|w| (1.0 + w.norm_sqr()).powi(-3)),
            decay: DecayProfile {
                power: 6.0,
                singular_origin: false,
            },
        }
    }
}

/// Residual of the change-of-variables identity
/// `∫ |y|^{2(α-1)} f(y^α) dy = (1/α) ∫ f dy`.
pub fn change_of_variables_check(f: &TestFunction, alpha: u32, tol: f64) -> Result<f64> {
    if alpha < 1 {
        return Err(Error::invalid("alpha must be a positive integer"));
    }
    let a = alpha as f64;
    let q = f.decay.power;
    let lhs_decay = DecayProfile {
        power: a * (q - 2.0) + 2.0,
        singular_origin: false,
    };
    let lhs = integrate_plane(
        |x, y| {
            let z = Complex64::new(x, y);
            (x * x + y * y).powi(alpha as i32 - 1) * (f.eval)(z.powu(alpha))
        },
        lhs_decay,
        tol,
    )?;
    let rhs = integrate_plane(|x, y| (f.eval)(Complex64::new(x, y)), f.decay, tol)?;
    Ok((lhs.value - rhs.value / a).abs())
}

/// Both vanishing moments `∫ |y|^{2(α-1)} f(y^α) Re(y^γ) dy` and the Im
/// companion, which are zero for `γ = 1, …, α-1` by the α-fold angular
/// symmetry of `y ↦ f(y^α)`.
pub fn vanishing_moment_check(
    f: &TestFunction,
    alpha: u32,
    gamma: u32,
    tol: f64,
) -> Result<(f64, f64)> {
    if alpha < 2 {
        return Err(Error::invalid("vanishing moments need alpha ≥ 2"));
    }
    if gamma < 1 || gamma > alpha - 1 {
        return Err(Error::invalid(format!(
            "gamma must lie in 1..={}, got {gamma}",
            alpha - 1
        )));
    }
    let a = alpha as f64;
    let decay = DecayProfile {
        power: a * (f.decay.power - 2.0) + 2.0 - gamma as f64,
        singular_origin: false,
    };
    let moment = |take_im: bool| {
        integrate_plane(
            |x, y| {
                let z = Complex64::new(x, y);
                let m = z.powu(gamma);
                let factor = if take_im { m.im } else { m.re };
                (x * x + y * y).powi(alpha as i32 - 1) * (f.eval)(z.powu(alpha)) * factor
            },
            decay,
            tol,
        )
    };
    Ok((moment(false)?.value, moment(true)?.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn suite_alpha_one_origin() {
        let r = canonical_identities(1, Complex64::new(0.0, 0.0), 1e-10).unwrap();
        assert_relative_eq!(r.id1, -PI / 2.0, epsilon = 1e-9);
        assert!(r.id2.abs() < 1e-9);
        assert_relative_eq!(r.id3, PI / 12.0, epsilon = 1e-9);
        assert_relative_eq!(r.quantization, 8.0 * PI, epsilon = 1e-8);
    }

    #[test]
    fn suite_alpha_two_origin() {
        let r = canonical_identities(2, Complex64::new(0.0, 0.0), 1e-10).unwrap();
        assert_relative_eq!(r.id1, -PI / 4.0, epsilon = 1e-9);
        assert_relative_eq!(r.id3, PI / 24.0, epsilon = 1e-9);
        assert_relative_eq!(r.id3_im, PI / 24.0, epsilon = 1e-9);
        assert_relative_eq!(r.quantization, 16.0 * PI, epsilon = 1e-7);
    }

    #[test]
    fn suite_is_shift_invariant() {
        let xi = Complex64::new(0.5, 0.25);
        let r = canonical_identities(3, xi, 1e-9).unwrap();
        assert_relative_eq!(r.id1, -PI / 6.0, epsilon = 1e-7);
        assert!(r.id2.abs() < 1e-7);
        assert_relative_eq!(r.id3, PI / 36.0, epsilon = 1e-7);
        assert_relative_eq!(r.quantization, 24.0 * PI, epsilon = 1e-6);
    }

    #[test]
    fn change_of_variables_gaussian() {
        let f = TestFunction::gaussian();
        assert!(change_of_variables_check(&f, 1, 1e-10).unwrap() < 1e-9);
        assert!(change_of_variables_check(&f, 3, 1e-10).unwrap() < 1e-8);
    }

    #[test]
    fn change_of_variables_rational_alpha2() {
        // Common value (1/2)·(π/2) = π/4 against the Beta oracle.
        let f = TestFunction::rational_cubed();
        let lhs = integrate_plane(
            |x, y| {
                let z = Complex64::new(x, y);
                (x * x + y * y) * (f.eval)(z.powu(2))
            },
            DecayProfile::new(10.0).unwrap(),
            1e-10,
        )
        .unwrap();
        assert_relative_eq!(lhs.value, PI / 4.0, epsilon = 1e-9);
        assert!(change_of_variables_check(&f, 2, 1e-10).unwrap() < 1e-8);
    }

    #[test]
    fn moments_vanish() {
        let f = TestFunction::rational_cubed();
        let (re, im) = vanishing_moment_check(&f, 2, 1, 1e-10).unwrap();
        assert!(re.abs() < 1e-9 && im.abs() < 1e-9);

        let shifted = TestFunction {
            eval: Box::new(|w| (1.0 + (w - Complex64::new(0.3, 0.0)).norm_sqr()).powi(-3)),
            decay: DecayProfile::new(6.0).unwrap(),
        };
        let (re, im) = vanishing_moment_check(&shifted, 3, 2, 1e-10).unwrap();
        assert!(re.abs() < 1e-8 && im.abs() < 1e-8);
    }

    #[test]
    fn moment_gamma_out_of_range() {
        let f = TestFunction::rational_cubed();
        assert!(vanishing_moment_check(&f, 3, 3, 1e-8).is_err());
        assert!(vanishing_moment_check(&f, 3, 0, 1e-8).is_err());
    }
}
