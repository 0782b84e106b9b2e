//! P1 assembly: stiffness, weighted mass, load vectors, norms.

use num_complex::Complex64;

use super::block_tri::BlockTriFactor;
use super::field::Field;
use super::mesh::{triangle_area, Discretization};
use super::triquad::TRI7;
use super::LinearSolveReport;
use crate::error::Error;
use crate::util::pairwise_sum;
use crate::Result;

/// Compressed sparse rows with deterministic layout.
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl Csr {
    pub fn from_triplets(n: usize, triplets: &[(u32, u32, f64)]) -> Self {
        let mut sorted: Vec<(u32, u32, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut col: Vec<u32> = Vec::with_capacity(sorted.len());
        let mut val: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut rows: Vec<u32> = Vec::with_capacity(sorted.len());
        for &(i, j, v) in &sorted {
            if rows.last() == Some(&i) && col.last() == Some(&j) {
                *val.last_mut().unwrap() += v;
            } else {
                rows.push(i);
                col.push(j);
                val.push(v);
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &i in &rows {
            row_ptr[i as usize + 1] += 1;
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr {
            n,
            row_ptr,
            col,
            val,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            y[i] = acc;
        }
        y
    }
}

impl Discretization {
    /// Per-cell loop over all triangles, deterministic order.
    fn for_each_cell(&self, mut body: impl FnMut(&[usize; 3], [Complex64; 3], f64)) {
        for cell in &self.cells {
            let idx = [cell[0] as usize, cell[1] as usize, cell[2] as usize];
            let p = [self.nodes[idx[0]], self.nodes[idx[1]], self.nodes[idx[2]]];
            let area = triangle_area(p[0], p[1], p[2]);
            body(&idx, p, area);
        }
    }

    /// Stiffness triplets over all nodes (boundary rows included).
    pub fn stiffness_triplets(&self) -> Vec<(u32, u32, f64)> {
        let mut t = Vec::with_capacity(9 * self.cells.len());
        self.for_each_cell(|idx, p, area| {
            // Constant gradients of the barycentric basis.
            let g = [
                (p[1] - p[2]) * Complex64::new(0.0, 1.0),
                (p[2] - p[0]) * Complex64::new(0.0, 1.0),
                (p[0] - p[1]) * Complex64::new(0.0, 1.0),
            ];
            for a in 0..3 {
                for b in 0..3 {
                    let v = (g[a].re * g[b].re + g[a].im * g[b].im) / (4.0 * area);
                    t.push((idx[a] as u32, idx[b] as u32, v));
                }
            }
        });
        t
    }

    /// Weighted mass triplets `∫ w(x) φ_a φ_b` with the degree-5 cell rule.
    pub fn weighted_mass_triplets(&self, w: &dyn Fn(Complex64) -> f64) -> Vec<(u32, u32, f64)> {
        let mut t = Vec::with_capacity(9 * self.cells.len());
        self.for_each_cell(|idx, p, area| {
            let mut local = [[0.0f64; 3]; 3];
            for (bary, wq) in TRI7 {
                let x = bary[0] * p[0] + bary[1] * p[1] + bary[2] * p[2];
                let wx = w(x) * wq * area;
                for a in 0..3 {
                    for b in 0..3 {
                        local[a][b] += wx * bary[a] * bary[b];
                    }
                }
            }
            for a in 0..3 {
                for b in 0..3 {
                    t.push((idx[a] as u32, idx[b] as u32, local[a][b]));
                }
            }
        });
        t
    }

    /// Load vector `∫ f φ_a` over all nodes.
    pub fn load_vector(&self, f: &dyn Fn(Complex64) -> f64) -> Vec<f64> {
        let mut load = vec![0.0; self.n_nodes()];
        self.for_each_cell(|idx, p, area| {
            for (bary, wq) in TRI7 {
                let x = bary[0] * p[0] + bary[1] * p[1] + bary[2] * p[2];
                let fx = f(x) * wq * area;
                for a in 0..3 {
                    load[idx[a]] += fx * bary[a];
                }
            }
        });
        load
    }

    fn stiffness_cache(&self) -> &Csr {
        self.stiffness
            .get_or_init(|| Csr::from_triplets(self.n_nodes(), &self.stiffness_triplets()))
    }

    /// H¹₀ inner product `∫ ∇u·∇v`.
    pub fn h1_inner(&self, u: &Field, v: &Field) -> Result<f64> {
        u.same_disc(v)?;
        let ku = self.stiffness_cache().apply(&u.values);
        let terms: Vec<f64> = ku.iter().zip(&v.values).map(|(a, b)| a * b).collect();
        Ok(pairwise_sum(&terms))
    }

    pub fn h1_norm(&self, u: &Field) -> Result<f64> {
        Ok(self.h1_inner(u, u)?.max(0.0).sqrt())
    }

    /// Stiffness action `K u` over all nodes.
    pub fn apply_stiffness(&self, u: &Field) -> Vec<f64> {
        self.stiffness_cache().apply(&u.values)
    }

    /// `‖u‖_{L^p(Ω)}` by the cell rule applied to the P1 interpolant.
    pub fn lp_norm(&self, u: &Field, p: f64) -> Result<f64> {
        if p < 1.0 {
            return Err(Error::invalid("p must be ≥ 1"));
        }
        let mut terms = Vec::with_capacity(self.cells.len());
        self.for_each_cell(|idx, pts, area| {
            let mut acc = 0.0;
            for (bary, wq) in TRI7 {
                let _ = pts;
                let v = bary[0] * u.values[idx[0]]
                    + bary[1] * u.values[idx[1]]
                    + bary[2] * u.values[idx[2]];
                acc += wq * area * v.abs().powf(p);
            }
            terms.push(acc);
        });
        Ok(pairwise_sum(&terms).powf(1.0 / p))
    }

    /// `∫_Ω f dx` by the cell rule (a mesh-level integral for diagnostics).
    pub fn integrate(&self, f: &dyn Fn(Complex64) -> f64) -> f64 {
        let mut terms = Vec::with_capacity(self.cells.len());
        self.for_each_cell(|_, pts, area| {
            let mut acc = 0.0;
            for (bary, wq) in TRI7 {
                let x = bary[0] * pts[0] + bary[1] * pts[1] + bary[2] * pts[2];
                acc += wq * area * f(x);
            }
            terms.push(acc);
        });
        pairwise_sum(&terms)
    }

    /// Same, with the P1 interpolant of a nodal field available to the
    /// integrand (used for `∫ g(x, φ(x)) dx` type quantities).
    pub fn integrate_with_field(&self, u: &Field, f: &dyn Fn(Complex64, f64) -> f64) -> f64 {
        let mut terms = Vec::with_capacity(self.cells.len());
        self.for_each_cell(|idx, pts, area| {
            let mut acc = 0.0;
            for (bary, wq) in TRI7 {
                let x = bary[0] * pts[0] + bary[1] * pts[1] + bary[2] * pts[2];
                let uu = bary[0] * u.values[idx[0]]
                    + bary[1] * u.values[idx[1]]
                    + bary[2] * u.values[idx[2]];
                acc += wq * area * f(x, uu);
            }
            terms.push(acc);
        });
        pairwise_sum(&terms)
    }

    /// Load vector `∫ f(x, φ(x)) φ_a` where the integrand sees the P1 value
    /// of a current iterate (the contraction right-hand side).
    pub fn load_vector_with_field(
        &self,
        u: &Field,
        f: &dyn Fn(Complex64, f64) -> f64,
    ) -> Vec<f64> {
        let mut load = vec![0.0; self.n_nodes()];
        self.for_each_cell(|idx, pts, area| {
            for (bary, wq) in TRI7 {
                let x = bary[0] * pts[0] + bary[1] * pts[1] + bary[2] * pts[2];
                let uu = bary[0] * u.values[idx[0]]
                    + bary[1] * u.values[idx[1]]
                    + bary[2] * u.values[idx[2]];
                let fx = f(x, uu) * wq * area;
                for a in 0..3 {
                    load[idx[a]] += fx * bary[a];
                }
            }
        });
        load
    }

    /// Bilinear form `∫ w(x) u v` (with `w ≡ 1` this is the L² product).
    pub fn weighted_mass(&self, w: &dyn Fn(Complex64) -> f64, u: &Field, v: &Field) -> Result<f64> {
        u.same_disc(v)?;
        let mut terms = Vec::with_capacity(self.cells.len());
        self.for_each_cell(|idx, pts, area| {
            let mut acc = 0.0;
            for (bary, wq) in TRI7 {
                let x = bary[0] * pts[0] + bary[1] * pts[1] + bary[2] * pts[2];
                let uu = bary[0] * u.values[idx[0]]
                    + bary[1] * u.values[idx[1]]
                    + bary[2] * u.values[idx[2]];
                let vv = bary[0] * v.values[idx[0]]
                    + bary[1] * v.values[idx[1]]
                    + bary[2] * v.values[idx[2]];
                acc += wq * area * w(x) * uu * vv;
            }
            terms.push(acc);
        });
        Ok(pairwise_sum(&terms))
    }

    /// Factor the Dirichlet Laplacian once.
    pub fn poisson_factor(&self) -> Result<&BlockTriFactor> {
        self.poisson.get_or_try_init(|| {
            let t = self.interior_triplets(&self.stiffness_triplets());
            BlockTriFactor::new(self.n_interior, self.n_theta, &t)
        })
    }

    /// Restrict triplets to interior dofs (Dirichlet elimination).
    pub fn interior_triplets(&self, t: &[(u32, u32, f64)]) -> Vec<(u32, u32, f64)> {
        let ni = self.n_interior as u32;
        t.iter()
            .filter(|&&(i, j, _)| i < ni && j < ni)
            .copied()
            .collect()
    }

    /// Solve `-Δu = f`, `u = 0` on ∂Ω.
    pub fn poisson_solve(
        self: &std::sync::Arc<Self>,
        f: &dyn Fn(Complex64) -> f64,
    ) -> Result<(Field, LinearSolveReport)> {
        let load = self.load_vector(f);
        self.poisson_solve_load(&load)
    }

    /// Same, with the right-hand side given as a nodal field (its P1
    /// interpolant is integrated against the basis).
    pub fn poisson_solve_field(
        self: &std::sync::Arc<Self>,
        rhs: &Field,
    ) -> Result<(Field, LinearSolveReport)> {
        if !std::sync::Arc::ptr_eq(&rhs.disc, self) {
            return Err(Error::invalid("rhs field lives on a different discretization"));
        }
        let load = self.load_vector_with_field(rhs, &|_, v| v);
        self.poisson_solve_load(&load)
    }

    /// Same, for a right-hand side already given as a load vector.
    pub fn poisson_solve_load(
        self: &std::sync::Arc<Self>,
        load: &[f64],
    ) -> Result<(Field, LinearSolveReport)> {
        let factor = self.poisson_factor()?;
        let b = &load[..self.n_interior];
        let mut x = factor.solve(b);
        // One refinement pass against the assembled operator.
        let k = self.stiffness_cache();
        let mut full = vec![0.0; self.n_nodes()];
        full[..self.n_interior].copy_from_slice(&x);
        let kx = k.apply(&full);
        let r: Vec<f64> = (0..self.n_interior).map(|i| b[i] - kx[i]).collect();
        let dx = factor.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        full[..self.n_interior].copy_from_slice(&x);
        let kx = k.apply(&full);
        let res: f64 = (0..self.n_interior)
            .map(|i| (b[i] - kx[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        Ok((
            Field::from_interior(self, &x),
            LinearSolveReport {
                residual_norm: res,
                smallest_pivot: factor.smallest_pivot,
                refinement_passes: 1,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::super::mesh::Resolution;
    use super::*;
    use crate::geometry::DomainModel;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn disk(h: f64) -> Arc<Discretization> {
        Arc::new(
            Discretization::build(&DomainModel::unit_disk(), &Resolution::uniform(h)).unwrap(),
        )
    }

    #[test]
    fn manufactured_poisson_second_order() {
        // -Δ(1-|x|²) = 4; nodal max error decays like h².
        let mut errs = Vec::new();
        let hs = [0.2, 0.1, 0.05];
        for &h in &hs {
            let d = disk(h);
            let (u, rep) = d.poisson_solve(&|_| 4.0).unwrap();
            assert!(rep.residual_norm < 1e-9, "algebraic residual {}", rep.residual_norm);
            let exact = Field::interpolate_h10(&d, |z| 1.0 - z.norm_sqr());
            errs.push(u.max_diff(&exact));
        }
        let slope = crate::util::loglog_slope(&hs, &errs, 0.0).unwrap();
        assert!(slope > 1.7, "convergence order {slope}, errors {errs:?}");
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let d = disk(0.15);
        let (u, _) = d.poisson_solve(&|_| 0.0).unwrap();
        assert!(u.values.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn h1_energy_oracle() {
        // ∫|∇(1-|x|²)|² = ∫4|x|² = 2π.
        let d = disk(0.04);
        let u = Field::interpolate_h10(&d, |z| 1.0 - z.norm_sqr());
        let e = d.h1_inner(&u, &u).unwrap();
        assert_relative_eq!(e, 2.0 * PI, max_relative = 2e-3);
    }

    #[test]
    fn weighted_mass_oracle_and_bilinearity() {
        let d = disk(0.04);
        let u = Field::interpolate_h10(&d, |z| 1.0 - z.norm_sqr());
        // ∫ (1-|x|²)² = π/3.
        let m = d.weighted_mass(&|_| 1.0, &u, &u).unwrap();
        assert_relative_eq!(m, PI / 3.0, max_relative = 2e-3);

        let v = Field::interpolate_h10(&d, |z| z.re * (1.0 - z.norm_sqr()));
        let w = Field::interpolate_h10(&d, |z| z.im * (1.0 - z.norm_sqr()));
        let mut vw = v.clone();
        vw.axpy(1.0, &w);
        let lhs = d.weighted_mass(&|z| 1.0 + z.norm_sqr(), &u, &vw).unwrap();
        let rhs = d.weighted_mass(&|z| 1.0 + z.norm_sqr(), &u, &v).unwrap()
            + d.weighted_mass(&|z| 1.0 + z.norm_sqr(), &u, &w).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-13);
    }

    #[test]
    fn cauchy_schwarz_on_random_pairs() {
        let d = disk(0.1);
        let mk = |k: f64| {
            Field::interpolate_h10(&d, move |z| {
                (1.0 - z.norm_sqr()) * ((k * z.re).sin() + (0.7 * k * z.im).cos())
            })
        };
        for k in 1..6 {
            let u = mk(k as f64);
            let v = mk(1.7 * k as f64 + 0.3);
            let uv = d.h1_inner(&u, &v).unwrap().abs();
            let uu = d.h1_norm(&u).unwrap();
            let vv = d.h1_norm(&v).unwrap();
            assert!(uv <= uu * vv * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lp_norm_zero_and_scaling() {
        let d = disk(0.1);
        let z = Field::zeros(&d);
        assert_eq!(d.lp_norm(&z, 2.0).unwrap(), 0.0);
        let u = Field::interpolate_h10(&d, |z| 1.0 - z.norm_sqr());
        let mut u2 = u.clone();
        u2.scale(-3.0);
        assert_relative_eq!(
            d.lp_norm(&u2, 2.0).unwrap(),
            3.0 * d.lp_norm(&u, 2.0).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn discrete_maximum_principle() {
        let d = disk(0.1);
        let (u, _) = d
            .poisson_solve(&|z| if z.re > 0.0 { 1.0 } else { 0.0 })
            .unwrap();
        assert!(u.values.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn galerkin_orthogonality() {
        // The discrete solution satisfies K u = load exactly (to solver tol),
        // so ∫∇u_h·∇v_h = ∫ f v_h for every test field.
        let d = disk(0.1);
        let f = |z: num_complex::Complex64| (3.0 * z.re).sin() + z.im;
        let (u, _) = d.poisson_solve(&f).unwrap();
        let load = d.load_vector(&f);
        for seed in 0..4 {
            let v = Field::interpolate_h10(&d, |z| {
                (1.0 - z.norm_sqr()) * ((seed as f64 + 1.0) * z.re).cos()
            });
            let lhs = d.h1_inner(&u, &v).unwrap();
            let rhs: f64 = load.iter().zip(&v.values).map(|(a, b)| a * b).sum();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn field_eval_interpolates() {
        let d = disk(0.05);
        let u = Field::interpolate_h10(&d, |z| 1.0 - z.norm_sqr());
        for &(x, y) in &[(0.3, 0.2), (0.0, 0.0), (-0.6, 0.1), (0.2, -0.7)] {
            let z = num_complex::Complex64::new(x, y);
            let v = u.eval(z);
            assert!((v - (1.0 - z.norm_sqr())).abs() < 5e-3, "eval {v}");
        }
    }
}
