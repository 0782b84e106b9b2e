//! Experiment drivers and artifact emission.
//!
//! Every artifact (JSON and CSV) embeds the config hash and crate version;
//! re-running an identical config byte-reproduces the outputs.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;

use crate::bubble::{delta_from_lambda, BubbleParams, ProjectedBubble};
use crate::discretization::{Discretization, Resolution};
use crate::geometry::{holomorphic_derivatives, GreensFunction};
use crate::potential::PotentialModel;
use crate::quadrature::{
    canonical_identities, change_of_variables_check, integrate_star, knots_for_scale,
    vanishing_moment_check, IdentityReport, StarQuadOptions, TestFunction,
};
use crate::reduction::{
    check_assumptions, jacobian_at_zero, reduced_map_f, scan_multipliers, MultiplierEval,
};
use crate::solver::{contraction_solve, continuation, ContinuationConfig, ContractionConfig};
use crate::util::loglog_slope;
use crate::Result;

use super::config::{Experiment, RunConfig};

pub struct RunOutcome {
    /// False when the experiment completed but could not certify its goal
    /// (failed hypotheses, uncertified roots, …).
    pub ok: bool,
    pub report: serde_json::Value,
    pub files: Vec<PathBuf>,
}

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn stamp(cfg: &RunConfig) -> String {
    format!("# liouville-core {} config {}\n", version(), cfg.hash())
}

fn write_artifact(
    dir: &Path,
    name: &str,
    contents: &str,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Identities => run_identities(cfg),
        Experiment::Kernels => run_kernels(cfg),
        Experiment::ReductionScan => run_reduction_scan(cfg),
        Experiment::Continuation => run_continuation(cfg),
    }
}

fn run_identities(cfg: &RunConfig) -> Result<RunOutcome> {
    let tol = cfg.tolerances.quad();
    let xis = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.25)];
    let mut rows = Vec::new();
    let mut csv = String::from(
        "alpha,xi_re,xi_im,id1,id1_expected,id2,id3,id3_expected,quantization,quantization_expected\n",
    );
    let mut worst_rel = 0.0f64;
    for &alpha in &cfg.alphas {
        for &xi in &xis {
            let r = canonical_identities(alpha, xi, tol)?;
            let rel1 = (r.id1 / IdentityReport::id1_expected(alpha) - 1.0).abs();
            let rel3 = (r.id3 / IdentityReport::id3_expected(alpha) - 1.0).abs();
            let relq = (r.quantization / IdentityReport::quantization_expected(alpha) - 1.0).abs();
            worst_rel = worst_rel.max(rel1).max(rel3).max(relq).max(r.id2.abs());
            csv.push_str(&format!(
                "{alpha},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                xi.re,
                xi.im,
                r.id1,
                IdentityReport::id1_expected(alpha),
                r.id2,
                r.id3,
                IdentityReport::id3_expected(alpha),
                r.quantization,
                IdentityReport::quantization_expected(alpha)
            ));
            rows.push(json!({
                "alpha": alpha,
                "xi": [xi.re, xi.im],
                "id1": r.id1, "id2": r.id2, "id3": r.id3, "id3_im": r.id3_im,
                "quantization": r.quantization,
                "max_quadrature_error": r.max_error_estimate,
            }));
        }
    }

    // Appendix-A checks: change of variables and vanishing moments.
    let mut cov = Vec::new();
    for &alpha in cfg.alphas.iter().filter(|&&a| a <= 3) {
        for (name, f) in [
            ("gaussian", TestFunction::gaussian()),
            ("rational", TestFunction::rational_cubed()),
        ] {
            let resid = change_of_variables_check(&f, alpha, tol)?;
            worst_rel = worst_rel.max(resid);
            cov.push(json!({"alpha": alpha, "function": name, "residual": resid}));
        }
    }
    let mut moments = Vec::new();
    for &alpha in cfg.alphas.iter().filter(|&&a| a >= 2) {
        for gamma in 1..alpha {
            let f = TestFunction::rational_cubed();
            let (re, im) = vanishing_moment_check(&f, alpha, gamma, tol)?;
            worst_rel = worst_rel.max(re.abs()).max(im.abs());
            moments.push(json!({"alpha": alpha, "gamma": gamma, "re": re, "im": im}));
        }
    }

    let report = json!({
        "version": version(),
        "config_hash": cfg.hash(),
        "experiment": "identities",
        "identities": rows,
        "change_of_variables": cov,
        "vanishing_moments": moments,
        "worst_relative_deviation": worst_rel,
    });
    let dir = Path::new(&cfg.output_dir);
    let mut files = Vec::new();
    write_artifact(
        dir,
        "ladder_identities.csv",
        &format!("{}{}", stamp(cfg), csv),
        &mut files,
    )?;
    write_artifact(
        dir,
        "report.json",
        &serde_json::to_string_pretty(&report)?,
        &mut files,
    )?;
    Ok(RunOutcome {
        ok: worst_rel < 1e-6,
        report,
        files,
    })
}

fn run_kernels(cfg: &RunConfig) -> Result<RunOutcome> {
    let gf = GreensFunction::new(cfg.domain.clone())?;
    let tol = cfg.tolerances.quad();
    let b_ladder = Complex64::from_polar(0.1, std::f64::consts::PI / 7.0);
    let mut per_alpha = Vec::new();
    let dir = Path::new(&cfg.output_dir);
    let mut files = Vec::new();
    let mut ok = true;

    for &alpha in cfg.alphas.iter().filter(|&&a| (2..=3).contains(&a)) {
        let mut csv = String::from("delta,res_pw,res_pz0,res_pz1,res_pz2,norm_pz1,norm_pz2,cross_pz12\n");
        let (mut r_pw, mut r_p0, mut r_p1) = (Vec::new(), Vec::new(), Vec::new());
        let mut norms = Vec::new();
        for &delta in &cfg.deltas {
            let params = BubbleParams::new(alpha, delta, b_ladder)?;
            let proj = ProjectedBubble::new(&gf, params)?;
            let grid = crate::bubble::sample_points(&gf.domain, 64, delta);
            let res_pw = proj.expansion_residual_pw(&gf, &grid)?;
            let res_pz: Vec<f64> = (0..3).map(|j| proj.expansion_residual_pz(j, &grid)).collect();

            // Kernel norms at b = 0 via ‖PZ^j‖² = ∫ w Z^j PZ^j.
            let p0 = BubbleParams::new(alpha, delta, Complex64::new(0.0, 0.0))?;
            let proj0 = ProjectedBubble::new(&gf, p0)?;
            let opts = StarQuadOptions {
                tol,
                max_panels: 200_000,
                radial_knots: Some(knots_for_scale(delta / gf.domain.inradius())),
            };
            let norm = |j: usize| -> Result<f64> {
                Ok(integrate_star(
                    |th| gf.domain.radius_at(th),
                    |x, y| {
                        let z = Complex64::new(x, y);
                        proj0.params.weight(z) * proj0.params.z(j, z) * proj0.pz(j, z)
                    },
                    &opts,
                )?
                .value)
            };
            let cross = integrate_star(
                |th| gf.domain.radius_at(th),
                |x, y| {
                    let z = Complex64::new(x, y);
                    proj0.params.weight(z) * proj0.params.z(1, z) * proj0.pz(2, z)
                },
                &opts,
            )?
            .value;
            let (n1, n2) = (norm(1)?, norm(2)?);
            csv.push_str(&format!(
                "{delta},{res_pw:.17e},{:.17e},{:.17e},{:.17e},{n1:.17e},{n2:.17e},{cross:.17e}\n",
                res_pz[0], res_pz[1], res_pz[2]
            ));
            r_pw.push(res_pw);
            r_p0.push(res_pz[0]);
            r_p1.push(res_pz[1]);
            norms.push((delta, n1, n2, cross));
        }
        let slope_pw = loglog_slope(&cfg.deltas, &r_pw, 1e-14);
        let slope_p0 = loglog_slope(&cfg.deltas, &r_p0, 1e-14);
        let slope_p1 = loglog_slope(&cfg.deltas, &r_p1, 1e-14);
        let target = 2.0 / 3.0 * std::f64::consts::PI * alpha as f64;
        if let Some((_, n1, n2, cross)) = norms.last() {
            ok &= (n1 / target - 1.0).abs() < 0.02
                && (n2 / target - 1.0).abs() < 0.02
                && cross.abs() < 0.02 * target;
        }
        per_alpha.push(json!({
            "alpha": alpha,
            "b": [b_ladder.re, b_ladder.im],
            "slope_pw": slope_pw, "slope_pz0": slope_p0, "slope_pz1": slope_p1,
            "expected": {"pw": 2.0*alpha as f64, "pz0": 2.0*alpha as f64, "pzi": alpha as f64},
            "norm_target": target,
            "norms": norms.iter().map(|(d,a,b,c)| json!({"delta": d, "pz1": a, "pz2": b, "cross": c})).collect::<Vec<_>>(),
        }));
        write_artifact(
            dir,
            &format!("ladder_projection_alpha{alpha}.csv"),
            &format!("{}{}", stamp(cfg), csv),
            &mut files,
        )?;
    }

    let report = json!({
        "version": version(),
        "config_hash": cfg.hash(),
        "experiment": "kernels",
        "ladders": per_alpha,
    });
    write_artifact(
        dir,
        "report.json",
        &serde_json::to_string_pretty(&report)?,
        &mut files,
    )?;
    Ok(RunOutcome {
        ok,
        report,
        files,
    })
}

fn run_reduction_scan(cfg: &RunConfig) -> Result<RunOutcome> {
    let alpha = cfg.n_vortex + 1;
    let gf = GreensFunction::new(cfg.domain.clone())?;
    let pot = PotentialModel::new(cfg.potential.clone(), &cfg.domain)?;
    let kd = holomorphic_derivatives(&gf, (alpha as usize).max(2), alpha)?;
    let assumption = check_assumptions(&pot, &kd, &cfg.domain, cfg.n_vortex)?;

    let dir = Path::new(&cfg.output_dir);
    let mut files = Vec::new();

    // Reduced-map scan over the unit B-disk.
    let mut csv = String::from("B1,B2,F1,F2\n");
    for i in 0..=6 {
        let r = i as f64 / 6.0;
        let n_th = if i == 0 { 1 } else { 12 };
        for j in 0..n_th {
            let th = std::f64::consts::TAU * j as f64 / n_th as f64;
            let b = Complex64::from_polar(r, th);
            let f = reduced_map_f(b, alpha.max(2), 1e-8, false)?.f;
            csv.push_str(&format!("{:.6},{:.6},{:.17e},{:.17e}\n", b.re, b.im, f[0], f[1]));
        }
    }
    write_artifact(
        dir,
        "reduced_map_scan.csv",
        &format!("{}{}", stamp(cfg), csv),
        &mut files,
    )?;

    // Multiplier scan over the physical search disk at the largest λ.
    let mut scan_rows = 0usize;
    if let Some(&lambda) = cfg.lambda_ladder.first() {
        let delta0 = delta_from_lambda(lambda, Complex64::new(0.0, 0.0), &pot, &gf, alpha)?;
        let disc = std::sync::Arc::new(Discretization::build(
            &cfg.domain,
            &Resolution::graded(delta0, cfg.n_theta, 16),
        )?);
        let ccfg = ContractionConfig {
            step_tol: cfg.tolerances.step(),
            solver_tol: cfg.tolerances.solver_tol,
            ..ContractionConfig::default()
        };
        let mut map = |b: Complex64| -> Result<MultiplierEval> {
            let delta = delta_from_lambda(lambda, b, &pot, &gf, alpha)?;
            let params = BubbleParams::new(alpha, delta, b)?;
            let proj = ProjectedBubble::new(&gf, params)?;
            let (state, _) = contraction_solve(&disc, &proj, &gf, &pot, lambda, &ccfg, None)?;
            Ok(MultiplierEval {
                c: state.c,
                delta,
            })
        };
        let radius = 2.0 * delta0.powi(alpha as i32);
        let rows = scan_multipliers(&mut map, radius, 3, 8);
        scan_rows = rows.len();
        let mut mcsv = String::from("b1,b2,c1,c2\n");
        for (b1, b2, c1, c2) in rows {
            mcsv.push_str(&format!("{b1:.10e},{b2:.10e},{c1:.10e},{c2:.10e}\n"));
        }
        write_artifact(
            dir,
            "multiplier_scan.csv",
            &format!("{}{}", stamp(cfg), mcsv),
            &mut files,
        )?;
    }

    let jac0 = if alpha >= 2 {
        Some(jacobian_at_zero(alpha, cfg.tolerances.quad())?)
    } else {
        None
    };
    let report = json!({
        "version": version(),
        "config_hash": cfg.hash(),
        "experiment": "reduction_scan",
        "alpha": alpha,
        "assumption": assumption,
        "jacobian_at_zero": jac0,
        "multiplier_scan_rows": scan_rows,
    });
    write_artifact(
        dir,
        "report.json",
        &serde_json::to_string_pretty(&report)?,
        &mut files,
    )?;
    Ok(RunOutcome {
        ok: true,
        report,
        files,
    })
}

fn run_continuation(cfg: &RunConfig) -> Result<RunOutcome> {
    let pot = PotentialModel::new(cfg.potential.clone(), &cfg.domain)?;
    let ccfg = ContinuationConfig {
        n_theta: cfg.n_theta,
        contraction: ContractionConfig {
            step_tol: cfg.tolerances.step(),
            solver_tol: cfg.tolerances.solver_tol,
            ..ContractionConfig::default()
        },
        force: cfg.force,
        inverse_norm_probes: cfg.inverse_norm_probes,
        ..ContinuationConfig::default()
    };
    let rep = continuation(&cfg.domain, &pot, cfg.n_vortex, &cfg.lambda_ladder, &ccfg)?;

    let dir = Path::new(&cfg.output_dir);
    let mut files = Vec::new();
    let mut csv = String::from(
        "lambda,delta,b_re,b_im,phi_norm,c1,c2,mass,local_mass,farfield_error,energy,contraction_iterations,b_iterations,error\n",
    );
    for r in &rep.rows {
        let (mass, local, far, energy) = r
            .diagnostics
            .as_ref()
            .map(|d| (d.mass, d.local_mass, d.farfield_error, d.energy))
            .unwrap_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN));
        csv.push_str(&format!(
            "{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{},{},{}\n",
            r.lambda,
            r.delta,
            r.b_re,
            r.b_im,
            r.phi_norm,
            r.c1,
            r.c2,
            mass,
            local,
            far,
            energy,
            r.contraction_iterations,
            r.b_iterations,
            r.error.clone().unwrap_or_default().replace(',', ";")
        ));
    }
    write_artifact(
        dir,
        "ladder_continuation.csv",
        &format!("{}{}", stamp(cfg), csv),
        &mut files,
    )?;

    if let Some((disc, field)) = &rep.final_field {
        write_artifact(
            dir,
            "field_v_final.csv",
            &format!("{}{}", stamp(cfg), disc.field_csv(&field.values)),
            &mut files,
        )?;
        let (nodes, cells) = disc.mesh_csv();
        write_artifact(dir, "mesh_nodes.csv", &format!("{}{}", stamp(cfg), nodes), &mut files)?;
        write_artifact(dir, "mesh_cells.csv", &format!("{}{}", stamp(cfg), cells), &mut files)?;
    }

    let ok = rep.certified && rep.rows.iter().all(|r| r.error.is_none());
    let mut report = serde_json::to_value(&rep)?;
    if let serde_json::Value::Object(map) = &mut report {
        map.insert("version".into(), json!(version()));
        map.insert("config_hash".into(), json!(cfg.hash()));
        map.insert("experiment".into(), json!("continuation"));
        map.insert("ok".into(), json!(ok));
    }
    write_artifact(
        dir,
        "report.json",
        &serde_json::to_string_pretty(&report)?,
        &mut files,
    )?;
    Ok(RunOutcome { ok, report, files })
}
