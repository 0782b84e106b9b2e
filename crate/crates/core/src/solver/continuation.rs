//! λ-continuation: run the reduction at each rung of a decreasing ladder,
//! warm-starting the remainder and the shift from the previous rung.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::bubble::{delta_from_lambda, BubbleParams, ProjectedBubble};
use crate::discretization::{Discretization, Field, Resolution};
use crate::error::Error;
use crate::geometry::{holomorphic_derivatives, DomainModel, GreensFunction};
use crate::potential::PotentialModel;
use crate::reduction::{
    check_assumptions, solve_for_b, AssumptionReport, BRootConfig, MultiplierEval, TheoremCase,
};
use crate::util::loglog_slope;
use crate::Result;

use super::contraction::{contraction_solve, ContractionConfig};
use super::solution::{assemble_solution, SolutionDiagnostics};

pub struct ContinuationConfig {
    pub n_theta: usize,
    pub nodes_per_delta: usize,
    pub contraction: ContractionConfig,
    /// Search radius factor for the b-root (disk `|b| ≤ r δ^α`).
    pub radius_factor: f64,
    /// Run the ladder even when the assumption checker reports no case.
    pub force: bool,
    /// Number of random linearized probes per rung (0 disables).
    pub inverse_norm_probes: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            n_theta: 96,
            nodes_per_delta: 16,
            contraction: ContractionConfig::default(),
            radius_factor: 2.0,
            force: false,
            inverse_norm_probes: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuationRow {
    pub lambda: f64,
    pub delta: f64,
    pub b_re: f64,
    pub b_im: f64,
    pub phi_norm: f64,
    pub c1: f64,
    pub c2: f64,
    pub contraction_iterations: usize,
    pub b_iterations: usize,
    pub degree_margin: f64,
    #[serde(flatten)]
    pub diagnostics: Option<SolutionDiagnostics>,
    pub inv_norm_estimate: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFits {
    /// d log‖φ‖ / d log λ (expect ≥ 1/α - ε).
    pub phi_vs_lambda: Option<f64>,
    /// d log|b*| / d log δ (expect ≈ α+1 when b* is nonzero).
    pub b_vs_delta: Option<f64>,
    /// d log|mass - 8πα| / d log λ.
    pub mass_gap_vs_lambda: Option<f64>,
    pub farfield_vs_lambda: Option<f64>,
}

#[derive(Serialize)]
pub struct ConvergenceReport {
    pub assumption: AssumptionReport,
    /// False when the hypotheses failed (the run, if forced, is uncertified).
    pub certified: bool,
    pub alpha: u32,
    pub mass_target: f64,
    pub rows: Vec<ContinuationRow>,
    pub slopes: SlopeFits,
    /// Mesh and regular part `v = PW + φ` of the last successful rung.
    #[serde(skip)]
    pub final_field: Option<(Arc<Discretization>, Field)>,
}

pub fn continuation(
    domain: &DomainModel,
    pot: &PotentialModel,
    n_vortex: u32,
    lambda_ladder: &[f64],
    cfg: &ContinuationConfig,
) -> Result<ConvergenceReport> {
    if lambda_ladder.is_empty() {
        return Err(Error::invalid("lambda ladder must not be empty"));
    }
    if lambda_ladder.iter().any(|&l| !(l > 0.0))
        || lambda_ladder.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::invalid(
            "lambda ladder must be positive and strictly decreasing",
        ));
    }
    let alpha = n_vortex + 1;
    let gf = GreensFunction::new(domain.clone())?;
    let kd = holomorphic_derivatives(&gf, (alpha as usize).max(2), alpha)?;
    let assumption = check_assumptions(pot, &kd, domain, n_vortex)?;
    let certified = assumption.theorem_case != TheoremCase::None;
    let mass_target = 8.0 * std::f64::consts::PI * alpha as f64;

    if !certified && !cfg.force {
        return Ok(ConvergenceReport {
            assumption,
            certified,
            alpha,
            mass_target,
            rows: Vec::new(),
            slopes: SlopeFits {
                phi_vs_lambda: None,
                b_vs_delta: None,
                mass_gap_vs_lambda: None,
                farfield_vs_lambda: None,
            },
            final_field: None,
        });
    }

    // One mesh graded for the smallest δ serves the whole ladder.
    let zero = Complex64::new(0.0, 0.0);
    let delta_min = delta_from_lambda(*lambda_ladder.last().unwrap(), zero, pot, &gf, alpha)?;
    let disc = Arc::new(Discretization::build(
        domain,
        &Resolution::graded(delta_min, cfg.n_theta, cfg.nodes_per_delta),
    )?);

    let warm_phi: RefCell<Option<Field>> = RefCell::new(None);
    let mut rows = Vec::new();
    let mut final_field = None;

    for &lambda in lambda_ladder {
        let row = run_rung(
            &disc, &gf, pot, alpha, lambda, &assumption, cfg, &warm_phi,
        );
        match row {
            Ok((r, v)) => {
                final_field = Some((disc.clone(), v));
                rows.push(r);
            }
            Err(e) => {
                // Recorded, ladder continues with a cold start.
                warm_phi.replace(None);
                rows.push(ContinuationRow {
                    lambda,
                    delta: delta_from_lambda(lambda, zero, pot, &gf, alpha).unwrap_or(f64::NAN),
                    b_re: f64::NAN,
                    b_im: f64::NAN,
                    phi_norm: f64::NAN,
                    c1: f64::NAN,
                    c2: f64::NAN,
                    contraction_iterations: 0,
                    b_iterations: 0,
                    degree_margin: 0.0,
                    diagnostics: None,
                    inv_norm_estimate: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }

    // Ladder slope fits over the successful rungs.
    let ok_rows: Vec<&ContinuationRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let lambdas: Vec<f64> = ok_rows.iter().map(|r| r.lambda).collect();
    let deltas: Vec<f64> = ok_rows.iter().map(|r| r.delta).collect();
    let phis: Vec<f64> = ok_rows.iter().map(|r| r.phi_norm).collect();
    let bs: Vec<f64> = ok_rows
        .iter()
        .map(|r| (r.b_re * r.b_re + r.b_im * r.b_im).sqrt())
        .collect();
    let gaps: Vec<f64> = ok_rows
        .iter()
        .filter_map(|r| r.diagnostics.as_ref().map(|d| (d.mass - mass_target).abs()))
        .collect();
    let fars: Vec<f64> = ok_rows
        .iter()
        .filter_map(|r| r.diagnostics.as_ref().map(|d| d.farfield_error))
        .collect();
    let slopes = SlopeFits {
        phi_vs_lambda: loglog_slope(&lambdas, &phis, 1e-14),
        b_vs_delta: loglog_slope(&deltas, &bs, 1e-13),
        mass_gap_vs_lambda: if gaps.len() == lambdas.len() {
            loglog_slope(&lambdas, &gaps, 1e-12)
        } else {
            None
        },
        farfield_vs_lambda: if fars.len() == lambdas.len() {
            loglog_slope(&lambdas, &fars, 1e-12)
        } else {
            None
        },
    };

    Ok(ConvergenceReport {
        assumption,
        certified,
        alpha,
        mass_target,
        rows,
        slopes,
        final_field,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_rung(
    disc: &Arc<Discretization>,
    gf: &GreensFunction,
    pot: &PotentialModel,
    alpha: u32,
    lambda: f64,
    assumption: &AssumptionReport,
    cfg: &ContinuationConfig,
    warm_phi: &RefCell<Option<Field>>,
) -> Result<(ContinuationRow, Field)> {
    // The multiplier map b ↦ (c₁,c₂): one contraction per evaluation.
    let last_state = RefCell::new(None);
    let mut map = |b: Complex64| -> Result<MultiplierEval> {
        let delta = delta_from_lambda(lambda, b, pot, gf, alpha)?;
        let params = BubbleParams::new(alpha, delta, b)?;
        let proj = ProjectedBubble::new(gf, params)?;
        let warm = warm_phi.borrow().clone();
        let (state, _sys) = contraction_solve(
            disc,
            &proj,
            gf,
            pot,
            lambda,
            &cfg.contraction,
            warm.as_ref(),
        )?;
        let eval = MultiplierEval {
            c: state.c,
            delta,
        };
        warm_phi.replace(Some(state.phi.clone()));
        last_state.replace(Some((state, proj)));
        Ok(eval)
    };

    let mut root_cfg = BRootConfig::new(alpha, assumption.a_value);
    root_cfg.radius_factor = cfg.radius_factor;
    let root = solve_for_b(&mut map, &root_cfg)?;
    let (state, proj) = last_state.into_inner().expect("converged rung has a state");

    let (v_field, diag) = assemble_solution(&state, disc, &proj, gf, pot)?;

    // Optional linearized-bound probe: max ‖φ‖/‖h‖ over random unit data.
    let inv_norm_estimate = if cfg.inverse_norm_probes > 0 {
        let sys = super::linearized::LinearizedSystem::new(disc, &proj, gf, pot, lambda)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_817);
        let mut worst = 0.0f64;
        for _ in 0..cfg.inverse_norm_probes {
            let mut h = Field::zeros(disc);
            for v in h.values[..disc.n_interior].iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
            let norm = disc.h1_norm(&h)?;
            h.scale(1.0 / norm);
            let sol = sys.solve_with_datum(&h)?;
            worst = worst.max(disc.h1_norm(&sol.phi)?);
        }
        Some(worst)
    } else {
        None
    };

    Ok((
        ContinuationRow {
            lambda,
            delta: state.delta,
            b_re: state.b.re,
            b_im: state.b.im,
            phi_norm: state.phi_norm,
            c1: state.c[0],
            c2: state.c[1],
            contraction_iterations: state.iterations,
            b_iterations: root.iterations,
            degree_margin: root.degree_margin,
            diagnostics: Some(diag),
            inv_norm_estimate,
            error: None,
        },
        v_field,
    ))
}
