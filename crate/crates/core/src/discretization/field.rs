//! Nodal fields over a discretization.

use std::sync::Arc;

use num_complex::Complex64;

use super::mesh::Discretization;
use crate::error::Error;
use crate::Result;

/// A member of the discrete H¹₀ space: one value per node, boundary trace
/// identically zero.
#[derive(Clone)]
pub struct Field {
    pub disc: Arc<Discretization>,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(disc: &Arc<Discretization>) -> Self {
        Field {
            disc: disc.clone(),
            values: vec![0.0; disc.n_nodes()],
        }
    }

    /// Interpolate a function at the nodes, forcing the zero boundary trace.
    pub fn interpolate_h10(disc: &Arc<Discretization>, f: impl Fn(Complex64) -> f64) -> Self {
        let mut values: Vec<f64> = disc.nodes.iter().map(|&z| f(z)).collect();
        for v in values.iter_mut().skip(disc.n_interior) {
            *v = 0.0;
        }
        Field {
            disc: disc.clone(),
            values,
        }
    }

    /// From interior dof values (boundary entries zero).
    pub fn from_interior(disc: &Arc<Discretization>, interior: &[f64]) -> Self {
        assert_eq!(interior.len(), disc.n_interior);
        let mut values = vec![0.0; disc.n_nodes()];
        values[..disc.n_interior].copy_from_slice(interior);
        Field {
            disc: disc.clone(),
            values,
        }
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[..self.disc.n_interior]
    }

    pub fn same_disc(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.disc, &other.disc) {
            Ok(())
        } else {
            Err(Error::invalid("fields live on different discretizations"))
        }
    }

    pub fn axpy(&mut self, a: f64, x: &Field) {
        for (s, v) in self.values.iter_mut().zip(&x.values) {
            *s += a * v;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for v in &mut self.values {
            *v *= a;
        }
    }

    /// Max nodal difference.
    pub fn max_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// P1 evaluation at an arbitrary point of the meshed domain.
    pub fn eval(&self, z: Complex64) -> f64 {
        let disc = &self.disc;
        // Locate the ring interval and sector via the structured layout.
        let th = z.arg().rem_euclid(std::f64::consts::TAU);
        let r_bd = disc.domain.radius_at(th);
        let s = (z.norm() / r_bd).clamp(0.0, 1.0);
        let n_theta = disc.n_theta;
        let sector = th / std::f64::consts::TAU * n_theta as f64;
        let j = (sector.floor() as usize).min(n_theta - 1);
        let ring_hi = match disc.rings.binary_search_by(|r| r.partial_cmp(&s).unwrap()) {
            Ok(k) => k,
            Err(k) => k.min(disc.rings.len() - 1),
        };
        let node = |ring: usize, jj: usize| -> usize {
            if ring == 0 {
                0
            } else {
                1 + (ring - 1) * n_theta + (jj % n_theta)
            }
        };
        // Try the (up to) four triangles of the located quad, then fall back
        // to a local scan; barycentric evaluation once found.
        let mut candidates: Vec<[usize; 3]> = Vec::with_capacity(8);
        for dj in [0usize, n_theta - 1] {
            let jj = (j + dj) % n_theta;
            if ring_hi == 0 {
                candidates.push([node(0, 0), node(1, jj), node(1, jj + 1)]);
            } else {
                let (a, b) = (node(ring_hi, jj), node(ring_hi, jj + 1));
                let (c, d) = (node(ring_hi + 1, jj), node(ring_hi + 1, jj + 1));
                candidates.push([a, c, d]);
                candidates.push([a, d, b]);
                candidates.push([node(ring_hi - 1, jj), a, b]);
                if ring_hi >= 2 {
                    let (a0, b0) = (node(ring_hi - 1, jj), node(ring_hi - 1, jj + 1));
                    candidates.push([a0, a, b]);
                    candidates.push([a0, b, b0]);
                }
            }
        }
        for tri in candidates {
            if let Some(v) = self.try_bary(z, tri, 1e-10) {
                return v;
            }
        }
        // Robust fallback (point on an edge between sectors, roundoff, …).
        for cell in &disc.cells {
            let tri = [cell[0] as usize, cell[1] as usize, cell[2] as usize];
            if let Some(v) = self.try_bary(z, tri, 1e-9) {
                return v;
            }
        }
        f64::NAN
    }

    fn try_bary(&self, z: Complex64, tri: [usize; 3], tol: f64) -> Option<f64> {
        let p0 = self.disc.nodes[tri[0]];
        let p1 = self.disc.nodes[tri[1]];
        let p2 = self.disc.nodes[tri[2]];
        let det = (p1.re - p0.re) * (p2.im - p0.im) - (p1.im - p0.im) * (p2.re - p0.re);
        if det.abs() < 1e-300 {
            return None;
        }
        let l1 = ((z.re - p0.re) * (p2.im - p0.im) - (z.im - p0.im) * (p2.re - p0.re)) / det;
        let l2 = ((p1.re - p0.re) * (z.im - p0.im) - (p1.im - p0.im) * (z.re - p0.re)) / det;
        let l0 = 1.0 - l1 - l2;
        if l0 >= -tol && l1 >= -tol && l2 >= -tol {
            Some(
                l0 * self.values[tri[0]] + l1 * self.values[tri[1]] + l2 * self.values[tri[2]],
            )
        } else {
            None
        }
    }
}
