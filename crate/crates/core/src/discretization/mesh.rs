//! Structured polar mesh on a star-shaped domain.

use num_complex::Complex64;

use crate::error::Error;
use crate::geometry::DomainModel;
use crate::Result;

/// Fixed mesh-quality floor: the fan triangles at the center have apex angle
/// 2π/n_θ, which bounds the minimum angle of the whole mesh from below.
pub const MIN_ANGLE_DEG: f64 = 0.5;

/// Resolution descriptor: angular count and the normalized radii of the
/// rings (strictly increasing, last entry 1).
#[derive(Debug, Clone)]
pub struct Resolution {
    pub n_theta: usize,
    pub rings: Vec<f64>,
}

impl Resolution {
    /// Quasi-uniform target spacing `h` (radial spacing h/2, matching the
    /// 4π/h² node-count heuristic on the unit disk).
    pub fn uniform(h: f64) -> Self {
        let n_theta = ((std::f64::consts::TAU / h).ceil() as usize).max(12);
        let n_r = ((2.0 / h).ceil() as usize).max(4);
        Resolution {
            n_theta,
            rings: (1..=n_r).map(|i| i as f64 / n_r as f64).collect(),
        }
    }

    /// Grading that resolves a concentration scale `delta` near the origin:
    /// spacing ≤ delta/nodes_per_delta out to 4·delta, then geometric growth.
    pub fn graded(delta: f64, n_theta: usize, nodes_per_delta: usize) -> Self {
        let fine = delta / nodes_per_delta as f64;
        let mut rings = Vec::new();
        let mut s = 0.0;
        while s < (4.0 * delta).min(0.5) {
            s += fine;
            rings.push(s);
        }
        let mut step = fine;
        while s < 1.0 {
            step *= 1.12;
            step = step.min(0.035);
            s += step;
            rings.push(s.min(1.0));
        }
        if let Some(last) = rings.last_mut() {
            *last = 1.0;
        }
        Resolution { n_theta, rings }
    }
}

/// The mesh: node 0 is the center, ring `i ∈ 1..=n_r` holds `n_theta` nodes,
/// the outermost ring carries the Dirichlet boundary flag.
pub struct Discretization {
    pub domain: DomainModel,
    pub n_theta: usize,
    pub rings: Vec<f64>,
    pub nodes: Vec<Complex64>,
    pub cells: Vec<[u32; 3]>,
    /// Interior dof count; dofs coincide with node ids `0..n_interior`.
    pub n_interior: usize,
    pub(super) stiffness: once_cell::sync::OnceCell<super::assemble::Csr>,
    pub(super) poisson: once_cell::sync::OnceCell<super::block_tri::BlockTriFactor>,
}

impl Discretization {
    pub fn build(domain: &DomainModel, res: &Resolution) -> Result<Self> {
        domain.validate()?;
        let n_theta = res.n_theta;
        let n_r = res.rings.len();
        if n_r < 3 || n_theta < 8 {
            return Err(Error::Resolution(
                "mesh needs at least 3 rings and 8 sectors".into(),
            ));
        }
        if res
            .rings
            .windows(2)
            .any(|w| w[1] <= w[0])
            || res.rings[0] <= 0.0
            || (res.rings[n_r - 1] - 1.0).abs() > 1e-14
        {
            return Err(Error::Resolution(
                "ring radii must be strictly increasing and end at 1".into(),
            ));
        }

        let mut nodes = Vec::with_capacity(1 + n_r * n_theta);
        nodes.push(Complex64::new(0.0, 0.0));
        for &s in &res.rings {
            for j in 0..n_theta {
                let th = std::f64::consts::TAU * j as f64 / n_theta as f64;
                nodes.push(Complex64::from_polar(s * domain.radius_at(th), th));
            }
        }

        let node_id = |ring: usize, j: usize| -> u32 {
            if ring == 0 {
                0
            } else {
                (1 + (ring - 1) * n_theta + (j % n_theta)) as u32
            }
        };

        let mut cells = Vec::with_capacity(2 * n_r * n_theta);
        for j in 0..n_theta {
            cells.push([node_id(0, 0), node_id(1, j), node_id(1, j + 1)]);
        }
        for ring in 1..n_r {
            for j in 0..n_theta {
                let (a, b) = (node_id(ring, j), node_id(ring, j + 1));
                let (c, d) = (node_id(ring + 1, j), node_id(ring + 1, j + 1));
                cells.push([a, c, d]);
                cells.push([a, d, b]);
            }
        }

        let disc = Discretization {
            domain: domain.clone(),
            n_theta,
            rings: res.rings.clone(),
            nodes,
            cells,
            n_interior: 1 + (n_r - 1) * n_theta,
            stiffness: once_cell::sync::OnceCell::new(),
            poisson: once_cell::sync::OnceCell::new(),
        };
        disc.check_quality()?;
        Ok(disc)
    }

    fn check_quality(&self) -> Result<()> {
        let floor = MIN_ANGLE_DEG.to_radians();
        for cell in &self.cells {
            let p: Vec<Complex64> = cell.iter().map(|&i| self.nodes[i as usize]).collect();
            let area = triangle_area(p[0], p[1], p[2]);
            if area <= 0.0 {
                return Err(Error::Resolution(format!(
                    "degenerate or inverted cell {cell:?}"
                )));
            }
            for k in 0..3 {
                let u = p[(k + 1) % 3] - p[k];
                let v = p[(k + 2) % 3] - p[k];
                let ang = (u.re * v.re + u.im * v.im) / (u.norm() * v.norm());
                if ang.acos() < floor {
                    return Err(Error::Resolution(format!(
                        "cell angle below {MIN_ANGLE_DEG}°"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_rings(&self) -> usize {
        self.rings.len()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        node >= self.n_interior
    }

    /// Count of mesh nodes inside the concentration region
    /// `|x^α - b| ≤ δ^α`; the resolution gate for bubble projections.
    pub fn nodes_in_concentration(&self, alpha: u32, delta: f64, b: Complex64) -> usize {
        let cap = delta.powi(alpha as i32);
        self.nodes
            .iter()
            .filter(|z| (z.powu(alpha) - b).norm() <= cap)
            .count()
    }

    /// Node-value CSV rows `(index, x1, x2, value)`.
    pub fn field_csv(&self, values: &[f64]) -> String {
        let mut out = String::from("node,x1,x2,value\n");
        for (i, (z, v)) in self.nodes.iter().zip(values).enumerate() {
            out.push_str(&format!("{i},{:.17e},{:.17e},{:.17e}\n", z.re, z.im, v));
        }
        out
    }

    /// Mesh export: node and cell CSV blocks.
    pub fn mesh_csv(&self) -> (String, String) {
        let mut nodes = String::from("node,x1,x2,boundary\n");
        for (i, z) in self.nodes.iter().enumerate() {
            nodes.push_str(&format!(
                "{i},{:.17e},{:.17e},{}\n",
                z.re,
                z.im,
                u8::from(self.is_boundary(i))
            ));
        }
        let mut cells = String::from("cell,n0,n1,n2\n");
        for (i, c) in self.cells.iter().enumerate() {
            cells.push_str(&format!("{i},{},{},{}\n", c[0], c[1], c[2]));
        }
        (nodes, cells)
    }
}

pub fn triangle_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    0.5 * ((b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_count_heuristic_band() {
        // ±20% of 4π/h² on the unit disk.
        let h = 0.05;
        let disc =
            Discretization::build(&DomainModel::unit_disk(), &Resolution::uniform(h)).unwrap();
        let expect = 4.0 * std::f64::consts::PI / (h * h);
        let n = disc.n_nodes() as f64;
        assert!(
            (n - expect).abs() < 0.2 * expect,
            "nodes {n} vs heuristic {expect}"
        );
    }

    #[test]
    fn refinement_scaling() {
        let d1 = Discretization::build(&DomainModel::unit_disk(), &Resolution::uniform(0.2))
            .unwrap();
        let d2 = Discretization::build(&DomainModel::unit_disk(), &Resolution::uniform(0.1))
            .unwrap();
        let ratio = d2.n_interior as f64 / d1.n_interior as f64;
        assert!((ratio - 4.0).abs() < 1.0, "interior node ratio {ratio}");
    }

    #[test]
    fn boundary_nodes_on_curve() {
        let dom = DomainModel::flower(3, 0.1);
        let disc = Discretization::build(&dom, &Resolution::uniform(0.1)).unwrap();
        for i in disc.n_interior..disc.n_nodes() {
            let z = disc.nodes[i];
            let r_bd = dom.radius_at(z.arg());
            assert!((z.norm() - r_bd).abs() < 1e-12);
        }
    }

    #[test]
    fn graded_mesh_resolves_bubble() {
        let delta = 0.05;
        let res = Resolution::graded(delta, 64, 16);
        let disc = Discretization::build(&DomainModel::unit_disk(), &res).unwrap();
        let n = disc.nodes_in_concentration(2, delta, Complex64::new(0.0, 0.0));
        assert!(n >= 16, "{n} nodes across the concentration region");
    }
}
