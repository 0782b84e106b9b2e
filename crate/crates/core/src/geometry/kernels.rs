//! Dirichlet Green's function `G(x,p)` and its regular part
//! `H(x,p) = G(x,p) + (1/2π) log|x-p|`.
//!
//! Disks use the method of images in closed form. General star-shaped
//! domains write `H(·,p)` as the harmonic extension of the boundary trace
//! `(1/2π) log|x-p|`, with the per-source extensions cached.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::domain::DomainModel;
use super::harmonic::HarmonicFn;
use crate::error::Error;
use crate::Result;

const POLE_RADIUS: f64 = 1e-12;

fn key_of(p: Complex64) -> (i64, i64) {
    ((p.re * 1e12).round() as i64, (p.im * 1e12).round() as i64)
}

pub struct GreensFunction {
    pub domain: DomainModel,
    cache: Mutex<HashMap<(i64, i64), Arc<HarmonicFn>>>,
    fit_tol: f64,
}

impl GreensFunction {
    pub fn new(domain: DomainModel) -> Result<Self> {
        domain.validate()?;
        Ok(GreensFunction {
            domain,
            cache: Mutex::new(HashMap::new()),
            fit_tol: 1e-11,
        })
    }

    fn require_inside(&self, z: Complex64) -> Result<()> {
        if self.domain.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { x: z.re, y: z.im })
        }
    }

    /// The harmonic function `x ↦ H(x,p)` for a curve domain.
    fn regular_part_fn(&self, p: Complex64) -> Result<Arc<HarmonicFn>> {
        let key = key_of(p);
        if let Some(f) = self.cache.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let dom = self.domain.clone();
        let g = move |th: f64| {
            let z = dom.boundary_point(th);
            (z - p).norm().ln() / (2.0 * PI)
        };
        let fit = Arc::new(HarmonicFn::extend(&self.domain, &g, self.fit_tol)?);
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| fit.clone());
        Ok(fit)
    }

    /// `H(x,p)`; both points interior, `x = p` allowed (Robin function on the
    /// diagonal).
    pub fn regular_part(&self, x: Complex64, p: Complex64) -> Result<f64> {
        self.require_inside(x)?;
        self.require_inside(p)?;
        match self.domain.disk_radius() {
            Some(radius) => {
                let r2 = radius * radius;
                Ok(((r2 - x * p.conj()).norm() / radius).ln() / (2.0 * PI))
            }
            None => Ok(self.regular_part_fn(p)?.eval(x)),
        }
    }

    /// `G(x,p) = (1/2π) log(1/|x-p|) + H(x,p)`; fails on the pole.
    pub fn green(&self, x: Complex64, p: Complex64) -> Result<f64> {
        if (x - p).norm() <= POLE_RADIUS {
            return Err(Error::GreenPole { x: x.re, y: x.im });
        }
        Ok(self.regular_part(x, p)? - (x - p).norm().ln() / (2.0 * PI))
    }

    /// Robin function `H(x,x)`.
    pub fn robin(&self, x: Complex64) -> Result<f64> {
        self.regular_part(x, x)
    }

    /// Gradient of `x ↦ H(x,p)` as the complex pairing `∂₁H - i ∂₂H`.
    pub fn regular_part_gradient(&self, x: Complex64, p: Complex64) -> Result<Complex64> {
        self.require_inside(x)?;
        self.require_inside(p)?;
        match self.domain.disk_radius() {
            Some(radius) => {
                // H = (1/2π) Re log((R² - x·conj(p))/R); d/dx log(R²-x p̄) = -p̄/(R²-x p̄)
                let r2 = radius * radius;
                Ok(-p.conj() / (r2 - x * p.conj()) / (2.0 * PI))
            }
            None => Ok(self.regular_part_fn(p)?.complex_gradient(x)),
        }
    }

    /// Sum `Σ_i H(x, β_i)` over the α-roots of `b`, evaluated directly.
    pub fn sum_regular_over_roots(&self, x: Complex64, roots: &[Complex64]) -> Result<f64> {
        let mut s = 0.0;
        for &beta in roots {
            s += self.regular_part(x, beta)?;
        }
        Ok(s)
    }

    /// Harmonic extension into the domain of arbitrary boundary data given as
    /// a function of the boundary angle. Exposed for the projection layer.
    pub fn harmonic_extension(&self, g: &dyn Fn(f64) -> f64) -> Result<HarmonicFn> {
        HarmonicFn::extend(&self.domain, g, self.fit_tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn unit_disk_images_oracle() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        // G(x,0) = -(1/2π) log|x| on the unit disk.
        let x = Complex64::new(0.5, 0.0);
        let g = gf.green(x, Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(g, (2.0f64).ln() / (2.0 * PI), epsilon = 1e-14);
        // H(·,0) ≡ 0.
        for &(a, b) in &[(0.3, 0.1), (-0.7, 0.2), (0.0, 0.0)] {
            let h = gf
                .regular_part(Complex64::new(a, b), Complex64::new(0.0, 0.0))
                .unwrap();
            assert!(h.abs() < 1e-15);
        }
    }

    #[test]
    fn scaled_disk_robin_center() {
        // Oracle: G(x,0) = (1/2π) log(2/|x|) on the radius-2 disk, so
        // H(x,0) = (1/2π) log 2 identically.
        let gf = GreensFunction::new(DomainModel::scaled_disk(2.0)).unwrap();
        let h00 = gf.robin(Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(h00, (2.0f64).ln() / (2.0 * PI), epsilon = 1e-14);
        let x = Complex64::new(0.5, -0.3);
        let g = gf.green(x, Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(g, (2.0 / x.norm()).ln() / (2.0 * PI), epsilon = 1e-14);
    }

    #[test]
    fn symmetry_of_g_and_h() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let x = Complex64::new(0.3, 0.1);
        let p = Complex64::new(-0.2, 0.4);
        assert_relative_eq!(
            gf.green(x, p).unwrap(),
            gf.green(p, x).unwrap(),
            epsilon = 1e-14
        );

        let gf = GreensFunction::new(DomainModel::flower(3, 0.1)).unwrap();
        for &(a, b, c, d) in &[(0.3, 0.1, -0.2, 0.4), (0.5, -0.5, 0.1, 0.6), (0.0, 0.0, 0.7, 0.1)]
        {
            let x = Complex64::new(a, b);
            let p = Complex64::new(c, d);
            let hxp = gf.regular_part(x, p).unwrap();
            let hpx = gf.regular_part(p, x).unwrap();
            assert_relative_eq!(hxp, hpx, epsilon = 1e-9);
        }
    }

    #[test]
    fn dirichlet_boundary_values() {
        let gf = GreensFunction::new(DomainModel::flower(3, 0.1)).unwrap();
        let p = Complex64::new(0.2, -0.3);
        for j in 0..24 {
            let th = TAU * (j as f64 + 0.21) / 24.0;
            // Just inside the boundary to stay in the domain.
            let z = gf.domain.boundary_point(th) * 0.999999;
            let g = gf.green(z, p).unwrap();
            assert!(g.abs() < 1e-6, "G at boundary = {g}");
        }
    }

    #[test]
    fn pole_and_domain_errors() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let x = Complex64::new(0.2, 0.2);
        assert!(matches!(gf.green(x, x), Err(Error::GreenPole { .. })));
        assert!(matches!(
            gf.green(Complex64::new(1.5, 0.0), x),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn harmonicity_of_regular_part() {
        // Five-point discrete Laplacian of x ↦ H(x,p) is O(h²)-small.
        let gf = GreensFunction::new(DomainModel::flower(3, 0.1)).unwrap();
        let p = Complex64::new(0.3, 0.2);
        let h = 1e-3;
        for &(a, b) in &[(0.1, -0.2), (-0.4, 0.3), (0.5, 0.0)] {
            let z = Complex64::new(a, b);
            let lap = (gf.regular_part(z + h, p).unwrap()
                + gf.regular_part(z - h, p).unwrap()
                + gf.regular_part(z + Complex64::new(0.0, h), p).unwrap()
                + gf.regular_part(z - Complex64::new(0.0, h), p).unwrap()
                - 4.0 * gf.regular_part(z, p).unwrap())
                / (h * h);
            assert!(lap.abs() < 1e-5, "discrete Laplacian {lap}");
        }
    }

    #[test]
    fn center_is_critical_point_in_symmetric_domains() {
        for dom in [DomainModel::unit_disk(), DomainModel::flower(3, 0.1)] {
            let gf = GreensFunction::new(dom).unwrap();
            let zero = Complex64::new(0.0, 0.0);
            let grad = gf.regular_part_gradient(zero, zero).unwrap();
            assert!(grad.norm() < 1e-9, "|∇H(0,0)| = {}", grad.norm());
        }
    }
}
