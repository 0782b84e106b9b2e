//! The potential `a(x)` and its local data at the origin.
//!
//! After rotating coordinates the normal form near 0 is
//! `a(x) = a(0) + ⟨∇a(0), x⟩ + (a₁₁x₁² + a₂₂x₂²)/2 + o(|x|²)`, so the model
//! carries `a(0)`, `∇a(0)` and the two second derivatives explicitly and
//! validates them against finite differences of the profile.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::DomainModel;
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialProfile {
    /// `a(x) = a0 + ⟨grad, x⟩ + (a11 x₁² + a22 x₂²)/2`
    Quadratic,
    /// Arbitrary expression in `x1`, `x2` (meval syntax).
    Expr { expr: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub a0: f64,
    #[serde(default)]
    pub grad: [f64; 2],
    #[serde(default)]
    pub a11: f64,
    #[serde(default)]
    pub a22: f64,
    #[serde(default = "default_profile")]
    pub profile: PotentialProfile,
}

fn default_profile() -> PotentialProfile {
    PotentialProfile::Quadratic
}

/// Validated, evaluatable potential.
pub struct PotentialModel {
    pub spec: PotentialSpec,
    expr: Option<meval::Expr>,
}

impl PotentialModel {
    pub fn new(spec: PotentialSpec, domain: &DomainModel) -> Result<Self> {
        let expr = match &spec.profile {
            PotentialProfile::Quadratic => None,
            PotentialProfile::Expr { expr } => Some(
                expr.parse::<meval::Expr>()
                    .map_err(|e| Error::invalid(format!("potential expression: {e}")))?,
            ),
        };
        let model = PotentialModel { spec, expr };
        model.validate(domain)?;
        Ok(model)
    }

    pub fn quadratic(a0: f64, grad: [f64; 2], a11: f64, a22: f64) -> Self {
        PotentialModel {
            spec: PotentialSpec {
                a0,
                grad,
                a11,
                a22,
                profile: PotentialProfile::Quadratic,
            },
            expr: None,
        }
    }

    /// The disk benchmark potential `a = 1 + |x|²/2`.
    pub fn one_plus_half_r2() -> Self {
        PotentialModel::quadratic(1.0, [0.0, 0.0], 1.0, 1.0)
    }

    pub fn constant_one() -> Self {
        PotentialModel::quadratic(1.0, [0.0, 0.0], 0.0, 0.0)
    }

    pub fn eval(&self, x: Complex64) -> f64 {
        match &self.expr {
            None => {
                let s = &self.spec;
                s.a0 + s.grad[0] * x.re + s.grad[1] * x.im
                    + 0.5 * (s.a11 * x.re * x.re + s.a22 * x.im * x.im)
            }
            Some(e) => {
                let ctx = meval::Context::new()
                    .var("x1", x.re)
                    .var("x2", x.im)
                    .clone();
                e.eval_with_context(ctx).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn a0(&self) -> f64 {
        self.spec.a0
    }

    pub fn grad0(&self) -> [f64; 2] {
        self.spec.grad
    }

    /// Δa(0) = a₁₁ + a₂₂.
    pub fn laplacian0(&self) -> f64 {
        self.spec.a11 + self.spec.a22
    }

    fn validate(&self, domain: &DomainModel) -> Result<()> {
        // Positivity on a sample grid.
        let n = 48;
        for i in 0..=n {
            for j in 0..=n {
                let x = Complex64::new(
                    -1.0 + 2.0 * i as f64 / n as f64,
                    -1.0 + 2.0 * j as f64 / n as f64,
                ) * domain.max_radius();
                if domain.contains(x) && !(self.eval(x) > 0.0) {
                    return Err(Error::invalid(format!(
                        "potential must be positive on the domain; a({:.3},{:.3}) = {}",
                        x.re,
                        x.im,
                        self.eval(x)
                    )));
                }
            }
        }
        // Supplied derivative data vs central finite differences at 0.
        let h = 1e-4;
        let at = |x1: f64, x2: f64| self.eval(Complex64::new(x1, x2));
        let g1 = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
        let g2 = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
        let d11 = (at(h, 0.0) - 2.0 * at(0.0, 0.0) + at(-h, 0.0)) / (h * h);
        let d22 = (at(0.0, h) - 2.0 * at(0.0, 0.0) + at(0.0, -h)) / (h * h);
        let checks = [
            (self.spec.a0, at(0.0, 0.0), "a0"),
            (self.spec.grad[0], g1, "grad[0]"),
            (self.spec.grad[1], g2, "grad[1]"),
            (self.spec.a11, d11, "a11"),
            (self.spec.a22, d22, "a22"),
        ];
        for (claimed, measured, name) in checks {
            if (claimed - measured).abs() > 1e-6 * claimed.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "potential derivative datum {name} = {claimed} disagrees with finite difference {measured}"
                )));
            }
        }
        Ok(())
    }
}
