//! The reduced map
//!
//! ```text
//!   F_j(B) = ∫ |y|^{2α} (1+|y^α-B|²)^{-3} · (Re, Im)(y^α - B) dy
//! ```
//!
//! whose nondegenerate zero at `B = 0` selects the shift parameter. The
//! Jacobian is computed from analytically differentiated integrands rather
//! than finite differences of `F`, which would amplify quadrature noise.

use num_complex::Complex64;

use crate::error::Error;
use crate::quadrature::{integrate_plane, DecayProfile};
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct ReducedMapValue {
    pub f: [f64; 2],
    pub jacobian: Option<[[f64; 2]; 2]>,
}

pub fn reduced_map_f(
    b_shift: Complex64,
    alpha: u32,
    tol: f64,
    with_jacobian: bool,
) -> Result<ReducedMapValue> {
    if alpha < 2 {
        return Err(Error::invalid("the reduced map needs alpha ≥ 2"));
    }
    if b_shift.norm() > 2.0 {
        return Err(Error::invalid(
            "|B| ≤ 2 required for uniform integrand decay",
        ));
    }
    let a = alpha as f64;
    let decay_f = DecayProfile::new(3.0 * a)?;
    let component = |take_im: bool| -> Result<f64> {
        let q = integrate_plane(
            |x, y| {
                let z = Complex64::new(x, y);
                let s = z.powu(alpha) - b_shift;
                let t = 1.0 + s.norm_sqr();
                let num = if take_im { s.im } else { s.re };
                z.norm_sqr().powi(alpha as i32) * num / (t * t * t)
            },
            decay_f,
            tol,
        )?;
        Ok(q.value)
    };
    let f = [component(false)?, component(true)?];

    let jacobian = if with_jacobian {
        let decay_j = DecayProfile::new(4.0 * a)?;
        let entry = |which: u8| -> Result<f64> {
            let q = integrate_plane(
                |x, y| {
                    let z = Complex64::new(x, y);
                    let s = z.powu(alpha) - b_shift;
                    let t = 1.0 + s.norm_sqr();
                    let w = z.norm_sqr().powi(alpha as i32) / (t * t * t * t);
                    match which {
                        0 => w * (6.0 * s.re * s.re - t),
                        1 => w * 6.0 * s.re * s.im,
                        _ => w * (6.0 * s.im * s.im - t),
                    }
                },
                decay_j,
                tol,
            )?;
            Ok(q.value)
        };
        let d11 = entry(0)?;
        let d12 = entry(1)?;
        let d22 = entry(2)?;
        Some([[d11, d12], [d12, d22]])
    } else {
        None
    };

    Ok(ReducedMapValue { f, jacobian })
}

/// The common diagonal entry of `DF(0)`:
/// `(1/α) ∫ |y|^{2/α} (2|y|²-1)/(1+|y|²)⁴ dy`, strictly positive for α ≥ 2.
pub fn jacobian_at_zero(alpha: u32, tol: f64) -> Result<f64> {
    if alpha < 2 {
        return Err(Error::invalid("alpha ≥ 2 required"));
    }
    let a = alpha as f64;
    let decay = DecayProfile::new(6.0 - 2.0 / a)?.with_singular_origin();
    let q = integrate_plane(
        |x, y| {
            let r2 = x * x + y * y;
            r2.powf(1.0 / a) * (2.0 * r2 - 1.0) / (1.0 + r2).powi(4)
        },
        decay,
        tol,
    )?;
    Ok(q.value / a)
}
