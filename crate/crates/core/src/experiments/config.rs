//! Run configuration: JSON in, validated, hashed.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::geometry::DomainModel;
use crate::potential::PotentialSpec;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Identities,
    Kernels,
    ReductionScan,
    Continuation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance for adaptive quadrature.
    #[serde(default = "default_quad_tol")]
    pub quadrature: f64,
    /// H¹ step tolerance for the contraction.
    #[serde(default = "default_step_tol")]
    pub contraction_step: f64,
    /// Uniform scale factor applied to both (CLI `--tol-scale`).
    #[serde(default = "default_one")]
    pub tol_scale: f64,
    /// Residual target of the bordered linear solves (relative).
    #[serde(default = "default_solver_tol")]
    pub solver_tol: f64,
    /// Cell quadrature order; the degree-5 7-point rule is the one built in.
    #[serde(default = "default_quad_order")]
    pub quadrature_order: usize,
}

fn default_quad_tol() -> f64 {
    1e-10
}
fn default_step_tol() -> f64 {
    1e-11
}
fn default_one() -> f64 {
    1.0
}
fn default_solver_tol() -> f64 {
    1e-12
}
fn default_quad_order() -> usize {
    7
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadrature: default_quad_tol(),
            contraction_step: default_step_tol(),
            tol_scale: 1.0,
            solver_tol: default_solver_tol(),
            quadrature_order: default_quad_order(),
        }
    }
}

impl Tolerances {
    pub fn quad(&self) -> f64 {
        self.quadrature * self.tol_scale
    }
    pub fn step(&self) -> f64 {
        self.contraction_step * self.tol_scale
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub domain: DomainModel,
    pub potential: PotentialSpec,
    #[serde(rename = "N", default = "default_n")]
    pub n_vortex: u32,
    #[serde(default)]
    pub lambda_ladder: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_out")]
    pub output_dir: String,
    /// Bubble scales for the kernel/projection ladders.
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    /// Alphas for the identity suite.
    #[serde(default = "default_alphas")]
    pub alphas: Vec<u32>,
    /// Angular mesh size for solver experiments.
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    /// Run continuation despite failed hypotheses (negative controls).
    #[serde(default)]
    pub force: bool,
    /// Random linearized-bound probes per continuation rung.
    #[serde(default)]
    pub inverse_norm_probes: usize,
}

fn default_n() -> u32 {
    1
}
fn default_out() -> String {
    "out".into()
}
fn default_deltas() -> Vec<f64> {
    vec![0.4, 0.2, 0.1, 0.05]
}
fn default_alphas() -> Vec<u32> {
    vec![1, 2, 3, 4]
}
fn default_n_theta() -> usize {
    96
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::config(e.path().to_string(), e.inner().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.domain
            .validate()
            .map_err(|e| Error::config("domain", e.to_string()))?;
        if self.n_vortex < 1 {
            return Err(Error::config("N", "must be a positive integer"));
        }
        if self.experiment == Experiment::Continuation {
            if self.lambda_ladder.is_empty() {
                return Err(Error::config("lambda_ladder", "must not be empty"));
            }
            if self.lambda_ladder.iter().any(|&l| !(l > 0.0)) {
                return Err(Error::config("lambda_ladder", "entries must be positive"));
            }
            if self.lambda_ladder.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::config(
                    "lambda_ladder",
                    "entries must be strictly decreasing",
                ));
            }
        }
        if !(self.tolerances.quadrature > 0.0)
            || !(self.tolerances.contraction_step > 0.0)
            || !(self.tolerances.tol_scale > 0.0)
            || !(self.tolerances.solver_tol > 0.0)
        {
            return Err(Error::config("tolerances", "must be positive"));
        }
        if self.tolerances.quadrature_order != 7 {
            return Err(Error::config(
                "tolerances.quadrature_order",
                "only the 7-point degree-5 cell rule is built in",
            ));
        }
        if self.deltas.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::config("deltas", "must be positive"));
        }
        if self.alphas.iter().any(|&a| a < 1) {
            return Err(Error::config("alphas", "must be ≥ 1"));
        }
        Ok(())
    }

    /// Hash of the canonical JSON serialization; embedded in every artifact.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(16);
        for b in digest.iter().take(8) {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_json(
            r#"{
              "experiment": "identities",
              "domain": {"kind": "unit_disk"},
              "potential": {"a0": 1.0},
              "N": 2
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.experiment, Experiment::Identities);
        assert_eq!(cfg.n_vortex, 2);
        assert_eq!(cfg.alphas, vec![1, 2, 3, 4]);
    }

    #[test]
    fn schema_violations_carry_field_paths() {
        let err = RunConfig::from_json(
            r#"{"experiment": "continuation", "domain": {"kind": "unit_disk"},
                "potential": {"a0": 1.0}, "N": 1, "lambda_ladder": []}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("lambda_ladder"), "{err}");

        let err = RunConfig::from_json(
            r#"{"experiment": "continuation", "domain": {"kind": "unit_disk"},
                "potential": {"a0": 1.0}, "N": 1, "lambda_ladder": [1e-3, 1e-2]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("decreasing"), "{err}");

        let err = RunConfig::from_json(r#"{"experiment": "bogus"}"#).unwrap_err();
        assert!(err.to_string().contains("experiment"), "{err}");
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::from_json(
            r#"{"experiment":"identities","domain":{"kind":"unit_disk"},"potential":{"a0":1.0}}"#,
        )
        .unwrap();
        let b = RunConfig::from_json(
            r#"{"experiment":"identities","domain":{"kind":"unit_disk"},"potential":{"a0":2.0}}"#,
        )
        .unwrap();
        assert_eq!(a.hash(), a.hash());
        assert_ne!(a.hash(), b.hash());
    }
}
