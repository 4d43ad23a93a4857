//! Run-configuration document (a single JSON file) and its translation
//! into core types.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use warpflow::{FlowConfig, RadialCurve, WarpFamily, WarpPotential};

/// Errors split by exit code: 2 for configuration problems, 3 for
/// numerical failures (bounds or domain violations while stepping).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

pub fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub fn numerical_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum WarpSpec {
    Euclidean {
        domain: [f64; 2],
    },
    Sphere {
        k: f64,
        r0: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Hyperbolic {
        k: f64,
        r0: f64,
        domain: [f64; 2],
    },
    Cylinder {
        c: f64,
        domain: [f64; 2],
    },
    ScaledSinh {
        amplitude: f64,
        k: f64,
        domain: [f64; 2],
    },
    Tabulated {
        r_lo: f64,
        r_hi: f64,
        phi: Vec<f64>,
        domain: [f64; 2],
    },
}

impl WarpSpec {
    pub fn build(&self) -> Result<Arc<WarpPotential>, CliError> {
        let warp = match self.clone() {
            WarpSpec::Euclidean { domain } => WarpPotential::euclidean(domain.into()),
            WarpSpec::Sphere { k, r0, domain } => match domain {
                Some(d) => WarpPotential::new(WarpFamily::Sphere { k, r0 }, d.into()),
                None => WarpPotential::sphere(k, r0),
            },
            WarpSpec::Hyperbolic { k, r0, domain } => {
                WarpPotential::new(WarpFamily::Hyperbolic { k, r0 }, domain.into())
            }
            WarpSpec::Cylinder { c, domain } => {
                WarpPotential::new(WarpFamily::Cylinder { c }, domain.into())
            }
            WarpSpec::ScaledSinh { amplitude, k, domain } => {
                WarpPotential::new(WarpFamily::ScaledSinh { amplitude, k }, domain.into())
            }
            WarpSpec::Tabulated { r_lo, r_hi, phi, domain } => {
                WarpPotential::new(WarpFamily::Tabulated { r_lo, r_hi, phi }, domain.into())
            }
        };
        warp.map(Arc::new).map_err(config_err)
    }
}

/// Harmonic sum r0 + sum_k a_k cos(k theta) + b_k sin(k theta); keys are
/// decimal harmonic numbers.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HarmonicSum {
    pub r0: f64,
    #[serde(default)]
    pub cos: BTreeMap<String, f64>,
    #[serde(default)]
    pub sin: BTreeMap<String, f64>,
}

impl HarmonicSum {
    pub fn eval(&self, theta: f64) -> Result<f64, CliError> {
        let mut r = self.r0;
        for (key, &amp) in self.cos.iter() {
            let k: u32 = key
                .parse()
                .map_err(|_| config_err(format!("bad cos harmonic key {key:?}")))?;
            r += amp * (k as f64 * theta).cos();
        }
        for (key, &amp) in self.sin.iter() {
            let k: u32 = key
                .parse()
                .map_err(|_| config_err(format!("bad sin harmonic key {key:?}")))?;
            r += amp * (k as f64 * theta).sin();
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Constant { constant: f64 },
    Csv { csv: PathBuf },
    Harmonics(HarmonicSum),
}

impl InitialSpec {
    /// Build the initial curve; any failure here (parse, grid size, radius
    /// out of the warp domain) is a configuration error.
    pub fn build(&self, warp: &Arc<WarpPotential>, n: usize) -> Result<RadialCurve, CliError> {
        match self {
            InitialSpec::Constant { constant } => {
                RadialCurve::slice(warp.clone(), n, *constant).map_err(config_err)
            }
            InitialSpec::Csv { csv } => {
                let text = std::fs::read_to_string(csv)
                    .map_err(|e| config_err(format!("cannot read {}: {e}", csv.display())))?;
                RadialCurve::from_csv(warp.clone(), &text).map_err(config_err)
            }
            InitialSpec::Harmonics(sum) => {
                let rho = warpflow::theta_grid(n)
                    .into_iter()
                    .map(|t| sum.eval(t))
                    .collect::<Result<Vec<f64>, CliError>>()?;
                RadialCurve::from_samples(warp.clone(), rho).map_err(config_err)
            }
        }
    }
}

fn default_safety() -> f64 {
    0.5
}
fn default_t_max() -> f64 {
    10.0
}
fn default_osc_tol() -> f64 {
    1e-8
}
fn default_sample_every() -> usize {
    100
}
fn default_true() -> bool {
    true
}
fn default_n() -> usize {
    256
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSection {
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_osc_tol")]
    pub osc_tol: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_true")]
    pub enforce_bounds: bool,
}

impl Default for FlowSection {
    fn default() -> Self {
        Self {
            safety: default_safety(),
            t_max: default_t_max(),
            osc_tol: default_osc_tol(),
            sample_every: default_sample_every(),
            enforce_bounds: true,
        }
    }
}

impl FlowSection {
    pub fn to_core(&self) -> FlowConfig {
        FlowConfig {
            safety: self.safety,
            t_max: self.t_max,
            osc_tol: self.osc_tol,
            sample_every: self.sample_every,
            enforce_bounds: self.enforce_bounds,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbSection {
    pub r0: f64,
    #[serde(default)]
    pub cos: BTreeMap<String, f64>,
    #[serde(default)]
    pub sin: BTreeMap<String, f64>,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
}

fn default_eps() -> Vec<f64> {
    vec![1e-2, 3e-3, 1e-3]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub warp: WarpSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub flow: FlowSection,
    /// sample count for `isocheck`
    #[serde(default)]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<PerturbSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    pub fn initial(&self) -> Result<&InitialSpec, CliError> {
        self.initial
            .as_ref()
            .ok_or_else(|| config_err("config is missing an \"initial\" curve"))
    }
}
