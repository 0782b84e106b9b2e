//! The constrained linearized problem
//!
//! ```text
//!   -Δφ - λV|x|^{2(α-1)}e^{PW} φ = Δh + Σ_j c_j Z^j |x|^{2(α-1)}e^{W},
//!   ⟨φ, PZ^j⟩_{H¹₀} = 0,   j = 1,2,
//! ```
//!
//! assembled as a bordered saddle system: the PDE block `K - M` is factored
//! once by the block-tridiagonal sweep; the two constraint rows and two
//! multiplier columns are handled through a 2×2 Schur complement with
//! iterative refinement at the bordered level (the PDE block has a
//! near-kernel along `PZ^{1,2}`, so refinement recovers the digits the inner
//! solve loses there).

use std::sync::Arc;

use num_complex::Complex64;

use crate::bubble::{potential_v, ProjectedBubble};
use crate::discretization::{BlockTriFactor, Csr, Discretization, Field, LinearSolveReport};
use crate::error::Error;
use crate::geometry::GreensFunction;
use crate::potential::PotentialModel;
use crate::Result;

pub struct LinearizedSolution {
    pub phi: Field,
    pub c: [f64; 2],
    pub report: LinearSolveReport,
}

/// The factored linearized operator at a fixed `(λ, b)`; reused across all
/// right-hand sides of a contraction run.
pub struct LinearizedSystem {
    pub disc: Arc<Discretization>,
    pub lambda: f64,
    /// Relative residual target for the bordered refinement loop.
    pub solver_tol: f64,
    factor: BlockTriFactor,
    a_int: Csr,
    pub pz: [Field; 3],
    constraint_rows: [Vec<f64>; 2],
    multiplier_cols: [Vec<f64>; 2],
    schur_cols: [Vec<f64>; 2],
    schur: [[f64; 2]; 2],
}

impl LinearizedSystem {
    /// The operator weight `λV(x)|x|^{2(α-1)}e^{PW(x)}`.
    pub fn operator_weight(
        proj: &ProjectedBubble,
        gf: &GreensFunction,
        pot: &PotentialModel,
        lambda: f64,
        x: Complex64,
    ) -> f64 {
        let v = potential_v(pot, gf, proj.params.alpha, x).unwrap_or(f64::NAN);
        proj.params.weight(x) * lambda * v * (-proj.e_w_at(x)).exp()
    }

    pub fn new(
        disc: &Arc<Discretization>,
        proj: &ProjectedBubble,
        gf: &GreensFunction,
        pot: &PotentialModel,
        lambda: f64,
    ) -> Result<Self> {
        let nodes_inside =
            disc.nodes_in_concentration(proj.params.alpha, proj.params.delta, proj.params.b);
        if nodes_inside < 16 {
            return Err(Error::Resolution(format!(
                "only {nodes_inside} nodes resolve the concentration region (need ≥ 16)"
            )));
        }

        let k_triplets = disc.stiffness_triplets();
        let m_triplets = disc
            .weighted_mass_triplets(&|x| Self::operator_weight(proj, gf, pot, lambda, x));
        let mut a_triplets = disc.interior_triplets(&k_triplets);
        a_triplets.extend(
            disc.interior_triplets(&m_triplets)
                .into_iter()
                .map(|(i, j, v)| (i, j, -v)),
        );
        let factor = BlockTriFactor::new(disc.n_interior, disc.n_theta, &a_triplets)?;
        let a_int = Csr::from_triplets(disc.n_interior, &a_triplets);

        let pz = [
            Field::interpolate_h10(disc, |z| proj.pz(0, z)),
            Field::interpolate_h10(disc, |z| proj.pz(1, z)),
            Field::interpolate_h10(disc, |z| proj.pz(2, z)),
        ];
        let constraint_rows = [
            disc.apply_stiffness(&pz[1])[..disc.n_interior].to_vec(),
            disc.apply_stiffness(&pz[2])[..disc.n_interior].to_vec(),
        ];
        let mk_col = |j: usize| {
            disc.load_vector(&|x| proj.params.weight(x) * proj.params.z(j, x))
                [..disc.n_interior]
                .to_vec()
        };
        let multiplier_cols = [mk_col(1), mk_col(2)];
        let schur_cols = [
            factor.solve(&multiplier_cols[0]),
            factor.solve(&multiplier_cols[1]),
        ];
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let schur = [
            [
                dot(&constraint_rows[0], &schur_cols[0]),
                dot(&constraint_rows[0], &schur_cols[1]),
            ],
            [
                dot(&constraint_rows[1], &schur_cols[0]),
                dot(&constraint_rows[1], &schur_cols[1]),
            ],
        ];
        let det = schur[0][0] * schur[1][1] - schur[0][1] * schur[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::NearResonance {
                smallest: det.abs(),
            });
        }

        Ok(LinearizedSystem {
            disc: disc.clone(),
            lambda,
            solver_tol: 1e-12,
            factor,
            a_int,
            pz,
            constraint_rows,
            multiplier_cols,
            schur_cols,
            schur,
        })
    }

    fn schur_solve(&self, r: [f64; 2]) -> [f64; 2] {
        let s = &self.schur;
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        [
            (s[1][1] * r[0] - s[0][1] * r[1]) / det,
            (-s[1][0] * r[0] + s[0][0] * r[1]) / det,
        ]
    }

    /// Solve the bordered system for an interior load vector `rhs`:
    /// `(K - M) φ = rhs + Σ c_j s_j`, `a_jᵀ φ = 0`.
    pub fn solve_bordered(&self, rhs: &[f64]) -> Result<LinearizedSolution> {
        let ni = self.disc.n_interior;
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

        let mut phi = self.factor.solve(rhs);
        let mut c = {
            let r = [
                -dot(&self.constraint_rows[0], &phi),
                -dot(&self.constraint_rows[1], &phi),
            ];
            self.schur_solve(r)
        };
        for (p, (y0, y1)) in phi
            .iter_mut()
            .zip(self.schur_cols[0].iter().zip(&self.schur_cols[1]))
        {
            *p += c[0] * y0 + c[1] * y1;
        }

        // Bordered-level iterative refinement.
        let mut passes = 0;
        let mut res_norm = f64::INFINITY;
        for _ in 0..2 {
            let aphi = self.a_int.apply(&phi);
            let mut r1 = vec![0.0; ni];
            for i in 0..ni {
                r1[i] = rhs[i] + c[0] * self.multiplier_cols[0][i]
                    + c[1] * self.multiplier_cols[1][i]
                    - aphi[i];
            }
            let r2 = [
                -dot(&self.constraint_rows[0], &phi),
                -dot(&self.constraint_rows[1], &phi),
            ];
            res_norm = (r1.iter().map(|v| v * v).sum::<f64>()
                + r2[0] * r2[0]
                + r2[1] * r2[1])
                .sqrt();
            let scale = (rhs.iter().map(|v| v * v).sum::<f64>()).sqrt().max(1e-300);
            if res_norm <= self.solver_tol * scale {
                break;
            }
            let dphi0 = self.factor.solve(&r1);
            let dc = {
                let r = [
                    r2[0] - dot(&self.constraint_rows[0], &dphi0),
                    r2[1] - dot(&self.constraint_rows[1], &dphi0),
                ];
                self.schur_solve(r)
            };
            for i in 0..ni {
                phi[i] +=
                    dphi0[i] + dc[0] * self.schur_cols[0][i] + dc[1] * self.schur_cols[1][i];
            }
            c[0] += dc[0];
            c[1] += dc[1];
            passes += 1;
        }

        Ok(LinearizedSolution {
            phi: Field::from_interior(&self.disc, &phi),
            c,
            report: LinearSolveReport {
                residual_norm: res_norm,
                smallest_pivot: self.factor.smallest_pivot,
                refinement_passes: passes,
            },
        })
    }

    /// The problem `(lla2)` with datum `h ∈ H¹₀`: rhs is `-K h`.
    pub fn solve_with_datum(&self, h: &Field) -> Result<LinearizedSolution> {
        let kh = self.disc.apply_stiffness(h);
        let rhs: Vec<f64> = kh[..self.disc.n_interior].iter().map(|v| -v).collect();
        self.solve_bordered(&rhs)
    }

    /// `Π^⊥` in the discrete H¹₀ product: remove the `PZ^{1,2}` components.
    pub fn project_perp(&self, u: &mut Field) -> Result<()> {
        let g11 = self.disc.h1_inner(&self.pz[1], &self.pz[1])?;
        let g12 = self.disc.h1_inner(&self.pz[1], &self.pz[2])?;
        let g22 = self.disc.h1_inner(&self.pz[2], &self.pz[2])?;
        let b1 = self.disc.h1_inner(u, &self.pz[1])?;
        let b2 = self.disc.h1_inner(u, &self.pz[2])?;
        let det = g11 * g22 - g12 * g12;
        let gamma = [(g22 * b1 - g12 * b2) / det, (g11 * b2 - g12 * b1) / det];
        u.axpy(-gamma[0], &self.pz[1]);
        u.axpy(-gamma[1], &self.pz[2]);
        Ok(())
    }
}
