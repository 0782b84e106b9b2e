//! The bubble family and its pointwise evaluations.
//!
//! ```text
//!   W_{δ,b}(x)  = log( 8α²δ^{2α} / (δ^{2α} + |x^α - b|²)² )
//!   Z⁰_{δ,b}(x) = (δ^{2α} - |x^α-b|²)/(δ^{2α} + |x^α-b|²)
//!   Z^j_{δ,b}(x) = δ^α Re/Im(x^α - b)/(δ^{2α} + |x^α-b|²),  j = 1,2
//! ```
//! with the concentration scale fixed by
//! `δ^{2α} = (λ/8α²)·V(0)·exp(8π Σ_i H(0,β_i))`.

use num_complex::Complex64;

use crate::error::Error;
use crate::geometry::{roots_of_b, GreensFunction};
use crate::potential::PotentialModel;
use crate::Result;

/// The ansatz triple `(α, δ, b)` with the α-roots of `b` cached.
#[derive(Debug, Clone)]
pub struct BubbleParams {
    pub alpha: u32,
    pub delta: f64,
    pub b: Complex64,
    pub roots: Vec<Complex64>,
}

impl BubbleParams {
    pub fn new(alpha: u32, delta: f64, b: Complex64) -> Result<Self> {
        if alpha < 1 {
            return Err(Error::invalid("alpha must be a positive integer"));
        }
        if !(delta > 0.0) {
            return Err(Error::invalid("delta must be positive"));
        }
        Ok(BubbleParams {
            alpha,
            delta,
            b,
            roots: roots_of_b(b, alpha),
        })
    }

    #[inline]
    pub fn delta_pow_2a(&self) -> f64 {
        self.delta.powi(2 * self.alpha as i32)
    }

    /// `|x^α - b|²`.
    #[inline]
    pub fn shifted_norm_sqr(&self, x: Complex64) -> f64 {
        (x.powu(self.alpha) - self.b).norm_sqr()
    }

    /// `W(x)`.
    pub fn w(&self, x: Complex64) -> f64 {
        let a = self.alpha as f64;
        let d2a = self.delta_pow_2a();
        (8.0 * a * a * d2a).ln() - 2.0 * (d2a + self.shifted_norm_sqr(x)).ln()
    }

    /// The concentrating weight `|x|^{2(α-1)} e^{W(x)}`, evaluated in factored
    /// form so the `|x| → 0` zero and the peak never go through exp(log ·).
    pub fn weight(&self, x: Complex64) -> f64 {
        let a = self.alpha as f64;
        let d2a = self.delta_pow_2a();
        let denom = d2a + self.shifted_norm_sqr(x);
        8.0 * a * a * d2a * x.norm_sqr().powi(self.alpha as i32 - 1) / (denom * denom)
    }

    /// Kernel `Z^j`, `j ∈ {0,1,2}`.
    pub fn z(&self, j: usize, x: Complex64) -> f64 {
        let d2a = self.delta_pow_2a();
        let s = x.powu(self.alpha) - self.b;
        let denom = d2a + s.norm_sqr();
        match j {
            0 => (d2a - s.norm_sqr()) / denom,
            1 => self.delta.powi(self.alpha as i32) * s.re / denom,
            2 => self.delta.powi(self.alpha as i32) * s.im / denom,
            _ => panic!("kernel index must be 0, 1 or 2"),
        }
    }
}

/// The regularized potential `V(x) = a(x) e^{-4π(α-1) H(x,0)}`.
pub fn potential_v(
    pot: &PotentialModel,
    gf: &GreensFunction,
    alpha: u32,
    x: Complex64,
) -> Result<f64> {
    let h = gf.regular_part(x, Complex64::new(0.0, 0.0))?;
    Ok(pot.eval(x) * (-4.0 * std::f64::consts::PI * (alpha as f64 - 1.0) * h).exp())
}

/// The scale rule `δ^{2α} = (λ/8α²) V(0) e^{8π Σ_i H(0,β_i)}`.
pub fn delta_from_lambda(
    lambda: f64,
    b: Complex64,
    pot: &PotentialModel,
    gf: &GreensFunction,
    alpha: u32,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda must be positive"));
    }
    let a = alpha as f64;
    let zero = Complex64::new(0.0, 0.0);
    let v0 = potential_v(pot, gf, alpha, zero)?;
    let roots = roots_of_b(b, alpha);
    let h_sum = gf.sum_regular_over_roots(zero, &roots)?;
    let d2a = lambda / (8.0 * a * a) * v0 * (8.0 * std::f64::consts::PI * h_sum).exp();
    Ok(d2a.powf(1.0 / (2.0 * a)))
}
