//! The JSON run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{AmplitudeKind, PhaseAmplitudeKernel};
use crate::psi::{PsiFunction, SupOptions, DEFAULT_Q_MAX};
use crate::quad::{bump, indicator, witness_f0, FunctionSpec, QuadConfig};
use crate::sharpness::{SweepConfig, DEFAULT_LAMBDA_GRID, DEFAULT_P_GRID};

pub const SCHEMA: &str = "bgls-osc/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(default = "default_kernel_name")]
    pub name: String,
    #[serde(default = "default_amplitude")]
    pub amplitude: AmplitudeKind,
    /// `a_ij` of the bilinear phase `Σ a_ij x_i y_j`, only for `"custom"`.
    #[serde(default)]
    pub coefficients: Option<Vec<Vec<f64>>>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            name: default_kernel_name(),
            amplitude: default_amplitude(),
            coefficients: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub psi: String,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default = "default_f")]
    pub f: String,
    #[serde(default = "default_psi")]
    pub psi: String,
    #[serde(default = "default_zeta")]
    pub zeta: String,
    /// `(ψ, f)` pairs of the upper-bound scan; empty means `[(psi, f)]`.
    #[serde(default)]
    pub pairs: Vec<PairConfig>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<f64>,
    /// Exponents and frequencies of the `L_r` lower-bound profile.
    #[serde(default = "default_r_grid")]
    pub r_grid: Vec<f64>,
    #[serde(default = "default_profile_lambdas")]
    pub profile_lambdas: Vec<f64>,
    #[serde(default = "default_q_max")]
    pub q_max: f64,
    #[serde(default = "default_tol_abs")]
    pub tol_abs: f64,
    #[serde(default = "default_tol_rel")]
    pub tol_rel: f64,
    #[serde(default = "default_max_panels")]
    pub max_panels: usize,
    #[serde(default = "default_x_grid_points")]
    pub x_grid_points: usize,
    /// Grid multiplier of the stability rerun.
    #[serde(default = "default_refine")]
    pub refine: usize,
    /// Largest tolerated refinement delta.
    #[serde(default = "default_stability_threshold")]
    pub stability_threshold: f64,
    /// Positive floor the lower-bound scans must clear.
    #[serde(default = "default_floor")]
    pub floor: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_kernel_name() -> String {
    "fourier".into()
}
fn default_amplitude() -> AmplitudeKind {
    AmplitudeKind::ExactIndicator
}
fn default_f() -> String {
    "f0".into()
}
fn default_psi() -> String {
    "psi0".into()
}
fn default_zeta() -> String {
    "lower-power:0.5".into()
}
fn default_lambda_grid() -> Vec<f64> {
    DEFAULT_LAMBDA_GRID.to_vec()
}
fn default_p_grid() -> Vec<f64> {
    DEFAULT_P_GRID.to_vec()
}
fn default_r_grid() -> Vec<f64> {
    vec![3.0, 4.0, 6.0]
}
fn default_profile_lambdas() -> Vec<f64> {
    vec![16.0, 256.0]
}
fn default_q_max() -> f64 {
    DEFAULT_Q_MAX
}
fn default_tol_abs() -> f64 {
    QuadConfig::default().abs_tol
}
fn default_tol_rel() -> f64 {
    QuadConfig::default().rel_tol
}
fn default_max_panels() -> usize {
    QuadConfig::default().max_panels
}
fn default_x_grid_points() -> usize {
    crate::operator::DEFAULT_X_GRID_POINTS
}
fn default_refine() -> usize {
    2
}
fn default_stability_threshold() -> f64 {
    0.05
}
fn default_floor() -> f64 {
    0.05
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({ "schema": SCHEMA })).expect("defaults deserialize")
    }
}

/// A config that failed to parse or validate, located as precisely as the
/// input allows.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl RunConfig {
    /// Parses and validates; `source` names the input in diagnostics.
    pub fn from_json(text: &str, source: &str) -> std::result::Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.inner();
            ConfigError {
                location: format!("{source}:{}:{}", inner.line(), inner.column()),
                message: if path == "." {
                    inner.to_string()
                } else {
                    format!("at `{path}`: {inner}")
                },
            }
        })?;
        cfg.validate().map_err(|(field, message)| ConfigError {
            location: format!("{source}: field `{field}`"),
            message,
        })?;
        Ok(cfg)
    }

    /// Checks the invariants serde cannot express, naming the offending field.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        if self.schema != SCHEMA {
            return Err(("schema", format!("expected \"{SCHEMA}\", got \"{}\"", self.schema)));
        }
        let grid = |name: &'static str, g: &[f64], ok: &dyn Fn(f64) -> bool, what: &str| {
            if g.is_empty() {
                return Err((name, "must be nonempty".to_string()));
            }
            match g.iter().find(|v| !ok(**v)) {
                Some(v) => Err((name, format!("entry {v} is outside {what}"))),
                None => Ok(()),
            }
        };
        grid(
            "lambda_grid",
            &self.lambda_grid,
            &|l| l >= 1.0 && l.is_finite(),
            "[1, ∞)",
        )?;
        grid("p_grid", &self.p_grid, &|p| p > 1.0 && p < 2.0, "(1, 2)")?;
        grid("r_grid", &self.r_grid, &|r| r > 2.0 && r.is_finite(), "(2, ∞)")?;
        grid(
            "profile_lambdas",
            &self.profile_lambdas,
            &|l| l >= 1.0 && l.is_finite(),
            "[1, ∞)",
        )?;
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("tol_abs", self.tol_abs)?;
        positive("tol_rel", self.tol_rel)?;
        positive("stability_threshold", self.stability_threshold)?;
        positive("floor", self.floor)?;
        if !(self.q_max > 2.0) || !self.q_max.is_finite() {
            return Err(("q_max", format!("must be finite and above 2, got {}", self.q_max)));
        }
        if self.max_panels == 0 {
            return Err(("max_panels", "must be positive".into()));
        }
        if self.x_grid_points < 2 {
            return Err(("x_grid_points", "must be at least 2".into()));
        }
        if self.refine < 2 {
            return Err(("refine", format!("must be at least 2, got {}", self.refine)));
        }
        Ok(())
    }

    pub fn quad(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: self.tol_abs,
            rel_tol: self.tol_rel,
            max_panels: self.max_panels,
        }
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            quad: self.quad(),
            x_grid_points: self.x_grid_points,
            sup: SupOptions::default(),
            q_max: self.q_max,
            x_domain: None,
            refine: self.refine,
        }
    }

    pub fn kernel(&self) -> Result<PhaseAmplitudeKernel> {
        PhaseAmplitudeKernel::from_name(
            &self.kernel.name,
            self.kernel.amplitude,
            self.kernel.coefficients.clone(),
        )
    }

    pub fn pairs(&self) -> Vec<PairConfig> {
        if self.pairs.is_empty() {
            vec![PairConfig {
                psi: self.psi.clone(),
                f: self.f.clone(),
            }]
        } else {
            self.pairs.clone()
        }
    }
}

/// `"f0"`, `"one"` (indicator of the cube) or `"bump"`.
pub fn function_from_name(name: &str, dim: usize) -> Result<FunctionSpec> {
    match name {
        "f0" if dim == 1 => Ok(witness_f0()),
        "f0" => Err(Error::DimensionMismatch {
            expected: 1,
            found: dim,
        }),
        "one" => indicator(dim),
        "bump" => bump(dim),
        other => Err(Error::Config(format!(
            "unknown function \"{other}\"; expected f0, one or bump"
        ))),
    }
}

pub fn psi_from_name(name: &str) -> Result<PsiFunction> {
    PsiFunction::from_name(name)
}
