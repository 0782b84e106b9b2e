//! Zero-trace projections of the bubble and its kernels.
//!
//! For a profile `u` with `-Δu = f` on the whole plane, the projection onto
//! zero boundary data is `Pu = u - E(u|∂Ω)` with `E` the harmonic extension
//! of the boundary trace: it satisfies `-ΔPu = f` in Ω and `Pu = 0` on ∂Ω.
//! This form is exact, so the expansion residuals below are limited only by
//! the harmonic-extension accuracy, not by a volume discretization.

use num_complex::Complex64;

use super::ansatz::BubbleParams;
use crate::error::Error;
use crate::geometry::{DomainModel, GreensFunction, HarmonicFn};
use crate::Result;

pub struct ProjectedBubble {
    pub params: BubbleParams,
    e_w: HarmonicFn,
    e_z: [HarmonicFn; 3],
}

impl ProjectedBubble {
    pub fn new(gf: &GreensFunction, params: BubbleParams) -> Result<Self> {
        for beta in &params.roots {
            if !gf.domain.contains(*beta) {
                return Err(Error::invalid(format!(
                    "bubble root β = {beta} lies outside the domain"
                )));
            }
        }
        let dom = gf.domain.clone();
        let p = params.clone();
        let e_w = gf.harmonic_extension(&move |th: f64| p.w(dom.boundary_point(th)))?;
        let mk = |j: usize| -> Result<HarmonicFn> {
            let dom = gf.domain.clone();
            let p = params.clone();
            gf.harmonic_extension(&move |th: f64| p.z(j, dom.boundary_point(th)))
        };
        let e_z = [mk(0)?, mk(1)?, mk(2)?];
        Ok(ProjectedBubble { params, e_w, e_z })
    }

    /// `PW(x)`.
    pub fn pw(&self, x: Complex64) -> f64 {
        self.params.w(x) - self.e_w.eval(x)
    }

    /// `PZ^j(x)`.
    pub fn pz(&self, j: usize, x: Complex64) -> f64 {
        self.params.z(j, x) - self.e_z[j].eval(x)
    }

    /// Harmonic extension of the `W`-trace (needed by the residual field:
    /// `e^{PW} = e^{W} e^{-E_W}`).
    pub fn e_w_at(&self, x: Complex64) -> f64 {
        self.e_w.eval(x)
    }

    /// Sup-norm gap between `PW` and the closed-form expansion
    /// `W - log(8α²δ^{2α}) + 8π Σ_i H(x,β_i)`; decays like `δ^{2α}`.
    pub fn expansion_residual_pw(&self, gf: &GreensFunction, grid: &[Complex64]) -> Result<f64> {
        let a = self.params.alpha as f64;
        let log_norm = (8.0 * a * a * self.params.delta_pow_2a()).ln();
        let mut sup = 0.0f64;
        for &x in grid {
            let h_sum = gf.sum_regular_over_roots(x, &self.params.roots)?;
            let closed = self.params.w(x) - log_norm + 8.0 * std::f64::consts::PI * h_sum;
            sup = sup.max((self.pw(x) - closed).abs());
        }
        Ok(sup)
    }

    /// Nodal interpolant of `PW` (or `PZ^j` via `pz_field`) on a mesh that
    /// resolves the concentration region: at least 16 nodes must fall inside
    /// `|x^α - b| ≤ δ^α`.
    pub fn pw_field(
        &self,
        disc: &std::sync::Arc<crate::discretization::Discretization>,
    ) -> Result<crate::discretization::Field> {
        self.resolution_gate(disc)?;
        Ok(crate::discretization::Field::interpolate_h10(disc, |z| {
            self.pw(z)
        }))
    }

    pub fn pz_field(
        &self,
        disc: &std::sync::Arc<crate::discretization::Discretization>,
        j: usize,
    ) -> Result<crate::discretization::Field> {
        self.resolution_gate(disc)?;
        Ok(crate::discretization::Field::interpolate_h10(disc, |z| {
            self.pz(j, z)
        }))
    }

    fn resolution_gate(
        &self,
        disc: &crate::discretization::Discretization,
    ) -> Result<()> {
        let n =
            disc.nodes_in_concentration(self.params.alpha, self.params.delta, self.params.b);
        if n < 16 {
            return Err(Error::Resolution(format!(
                "only {n} mesh nodes inside |x^α - b| ≤ δ^α (need ≥ 16)"
            )));
        }
        Ok(())
    }

    /// Sup-norm gap between `PZ^j` and its closed-form model (`Z⁰+1` for
    /// j = 0, `Z^j` for j = 1,2); decays like `δ^{2α}` resp. `δ^α`.
    pub fn expansion_residual_pz(&self, j: usize, grid: &[Complex64]) -> f64 {
        let mut sup = 0.0f64;
        for &x in grid {
            let model = if j == 0 {
                self.params.z(0, x) + 1.0
            } else {
                self.params.z(j, x)
            };
            sup = sup.max((self.pz(j, x) - model).abs());
        }
        sup
    }
}

/// Deterministic sample grid over the closed domain: polar rings (geometric
/// grading toward the origin down to `scale`) plus the boundary ring, where
/// harmonic residuals attain their sup.
pub fn sample_points(domain: &DomainModel, n_theta: usize, scale: f64) -> Vec<Complex64> {
    let mut rs = vec![0.0];
    let mut r = (scale / 4.0).clamp(1e-4, 0.2);
    while r < 0.999 {
        rs.push(r);
        r *= 1.35;
    }
    // Just inside the boundary, where harmonic residuals attain their sup.
    rs.push(1.0 - 1e-9);
    let mut pts = Vec::with_capacity(rs.len() * n_theta);
    for &t in &rs {
        for j in 0..n_theta {
            let th = std::f64::consts::TAU * (j as f64 + 0.13) / n_theta as f64;
            pts.push(Complex64::from_polar(t * domain.radius_at(th), th));
        }
    }
    pts
}


#[cfg(test)]
mod dual_route_tests {
    use super::*;
    use crate::discretization::{Discretization, Resolution};
    use std::sync::Arc;

    /// Dual-route check of the projection: the volume solve
    /// `-Δu = |x|^{2(α-1)}e^{W}` must reproduce the trace-based PW to
    /// discretization accuracy (the trace route is the high-precision one).
    #[test]
    fn fem_poisson_route_matches_trace_route() {
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let params = BubbleParams::new(1, 0.3, Complex64::new(0.0, 0.0)).unwrap();
        let proj = ProjectedBubble::new(&gf, params.clone()).unwrap();
        let mut errs = Vec::new();
        let hs = [0.1f64, 0.05, 0.025];
        for &h in &hs {
            let disc = Arc::new(
                Discretization::build(&gf.domain, &Resolution::uniform(h)).unwrap(),
            );
            let (u, _) = disc.poisson_solve(&|z| params.weight(z)).unwrap();
            let exact = proj.pw_field(&disc).unwrap();
            errs.push(u.max_diff(&exact));
        }
        let order = crate::util::loglog_slope(&hs, &errs, 0.0).unwrap();
        assert!(order > 1.6, "volume-route order {order}: {errs:?}");
        assert!(errs[2] < 2e-3, "fine-mesh gap {}", errs[2]);
    }
}
