//! Planar domains: disks and smooth star-shaped Fourier curves containing 0.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Boundary description. Curves are star-shaped about the origin with
/// `r(θ) = Σ cos_k·cos(kθ) + Σ sin_k·sin(kθ)` (index 0 of `fourier_cos` is
/// the constant term).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    UnitDisk,
    ScaledDisk {
        radius: f64,
    },
    Curve {
        fourier_cos: Vec<f64>,
        #[serde(default)]
        fourier_sin: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainModel {
    #[serde(flatten)]
    pub kind: DomainKind,
    /// Declared rotational symmetry order ℓ; verified, not trusted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry_order: Option<u32>,
}

impl DomainModel {
    pub fn unit_disk() -> Self {
        DomainModel {
            kind: DomainKind::UnitDisk,
            symmetry_order: None,
        }
    }

    pub fn scaled_disk(radius: f64) -> Self {
        DomainModel {
            kind: DomainKind::ScaledDisk { radius },
            symmetry_order: None,
        }
    }

    pub fn curve(fourier_cos: Vec<f64>, fourier_sin: Vec<f64>) -> Self {
        DomainModel {
            kind: DomainKind::Curve {
                fourier_cos,
                fourier_sin,
            },
            symmetry_order: None,
        }
    }

    /// The ℓ-symmetric test family `r(θ) = 1 + ε cos(ℓθ)`.
    pub fn flower(ell: u32, eps: f64) -> Self {
        let mut cos = vec![0.0; ell as usize + 1];
        cos[0] = 1.0;
        cos[ell as usize] = eps;
        DomainModel {
            kind: DomainKind::Curve {
                fourier_cos: cos,
                fourier_sin: vec![],
            },
            symmetry_order: Some(ell),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            DomainKind::UnitDisk => Ok(()),
            DomainKind::ScaledDisk { radius } => {
                if *radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("disk radius must be positive"))
                }
            }
            DomainKind::Curve { .. } => {
                let n = 720;
                for j in 0..n {
                    let r = self.radius_at(TAU * j as f64 / n as f64);
                    if !(r > 0.0) {
                        return Err(Error::invalid(
                            "boundary curve must satisfy r(θ) > 0 (origin interior, star-shaped)",
                        ));
                    }
                }
                if let Some(ell) = self.symmetry_order {
                    if !self.symmetry_check(ell) {
                        return Err(Error::invalid(format!(
                            "declared symmetry order {ell} not satisfied by the boundary"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Boundary radius in direction θ.
    pub fn radius_at(&self, theta: f64) -> f64 {
        match &self.kind {
            DomainKind::UnitDisk => 1.0,
            DomainKind::ScaledDisk { radius } => *radius,
            DomainKind::Curve {
                fourier_cos,
                fourier_sin,
            } => {
                let mut r = 0.0;
                for (k, c) in fourier_cos.iter().enumerate() {
                    r += c * (k as f64 * theta).cos();
                }
                for (k, s) in fourier_sin.iter().enumerate() {
                    r += s * (k as f64 * theta).sin();
                }
                r
            }
        }
    }

    /// Boundary point γ(θ).
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(self.radius_at(theta), theta)
    }

    /// Largest boundary radius (exact for disks, sampled for curves).
    pub fn max_radius(&self) -> f64 {
        match &self.kind {
            DomainKind::UnitDisk => 1.0,
            DomainKind::ScaledDisk { radius } => *radius,
            DomainKind::Curve { .. } => (0..1440)
                .map(|j| self.radius_at(TAU * j as f64 / 1440.0))
                .fold(0.0, f64::max),
        }
    }

    /// Smallest boundary radius.
    pub fn inradius(&self) -> f64 {
        match &self.kind {
            DomainKind::UnitDisk => 1.0,
            DomainKind::ScaledDisk { radius } => *radius,
            DomainKind::Curve { .. } => (0..1440)
                .map(|j| self.radius_at(TAU * j as f64 / 1440.0))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn disk_radius(&self) -> Option<f64> {
        match &self.kind {
            DomainKind::UnitDisk => Some(1.0),
            DomainKind::ScaledDisk { radius } => Some(*radius),
            DomainKind::Curve { .. } => None,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r == 0.0 {
            return true;
        }
        r < self.radius_at(z.arg())
    }

    /// True iff boundary samples are invariant under rotation by 2π/ℓ.
    pub fn symmetry_check(&self, ell: u32) -> bool {
        if ell == 0 {
            return false;
        }
        let n = 720;
        let shift = TAU / ell as f64;
        let scale = self.max_radius();
        (0..n).all(|j| {
            let th = TAU * j as f64 / n as f64;
            (self.radius_at(th + shift) - self.radius_at(th)).abs() <= 1e-10 * scale
        })
    }
}
