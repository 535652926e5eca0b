//! Run configuration: built from flags or read from a versioned JSON file.

use crate::error::{CliError, Result};
use harmeas_core::contour::ContourSpec;
use harmeas_core::halfspace::QuadratureSpec;
use harmeas_mc::McConfig;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Version of the JSON config and JSON output schema.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    Tabulate,
    ValidateAsymptotics,
    ValidateNormalization,
    McCompare,
    SpecfunSelftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Tabulate => "tabulate",
            Command::ValidateAsymptotics => "validate-asymptotics",
            Command::ValidateNormalization => "validate-normalization",
            Command::McCompare => "mc-compare",
            Command::SpecfunSelftest => "specfun-selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Halfspace,
    Hball,
    Ouball,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Halfspace => "halfspace",
            Geometry::Hball => "hball",
            Geometry::Ouball => "ouball",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Closed form used for the OU ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Derived,
    AsPrinted,
}

/// Large-|y| constant compared against in `validate-asymptotics`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Constant {
    #[default]
    Derived,
    Stated,
}

/// Half-space regime checked by `validate-asymptotics`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `P |y|^{2n-2} / (x_n - 1)` against its limit at fixed `x_n`.
    #[default]
    LargeY,
    /// `P / (x_n - 1)` against its limit as `x_n -> 1` at `|y| = rho`.
    Boundary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub n: Option<u32>,
    pub xn: Option<f64>,
    pub rho: Option<f64>,
    pub r: Option<f64>,
    pub xnorm: Option<f64>,
    pub phi: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub tail_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourOverrides {
    pub c: Option<f64>,
    pub height: Option<f64>,
    pub nodes: Option<usize>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McOverrides {
    pub dt: Option<f64>,
    pub paths: Option<u64>,
    pub seed: Option<u64>,
    pub boundary_eps: Option<f64>,
    pub max_steps: Option<u64>,
    pub step_growth: Option<f64>,
    pub overshoot_correction: Option<bool>,
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Validation {
    pub tol: Option<f64>,
    pub z_max: Option<f64>,
    pub constant: Option<Constant>,
    pub regime: Option<Regime>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Raw exit samples of `mc-compare`, as CSV.
    pub samples: Option<PathBuf>,
}

/// Everything a run needs. Unknown keys in a config file are errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub command: Command,
    #[serde(default)]
    pub geometry: Option<Geometry>,
    #[serde(default)]
    pub point: Point,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    #[serde(default)]
    pub contour: ContourOverrides,
    #[serde(default)]
    pub mc: McOverrides,
    #[serde(default)]
    pub validation: Validation,
    #[serde(default)]
    pub variant: Option<Variant>,
    #[serde(default)]
    pub output: Output,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            command,
            geometry: None,
            point: Point::default(),
            grid: Grid::default(),
            quadrature: QuadratureOverrides::default(),
            contour: ContourOverrides::default(),
            mc: McOverrides::default(),
            validation: Validation::default(),
            variant: None,
            output: Output::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "config schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn geometry(&self) -> Result<Geometry> {
        self.geometry
            .ok_or_else(|| CliError::Usage(format!("{} needs --geometry", self.command.name())))
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let d = QuadratureSpec::default();
        let q = &self.quadrature;
        QuadratureSpec {
            abs_tol: q.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: q.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: q.max_subdivisions.unwrap_or(d.max_subdivisions),
            tail_cutoff: q.tail_cutoff.unwrap_or(d.tail_cutoff),
        }
    }

    pub fn contour_spec(&self) -> ContourSpec {
        let d = ContourSpec::default();
        let c = &self.contour;
        ContourSpec {
            c: c.c.or(d.c),
            height: c.height.or(d.height),
            nodes: c.nodes.or(d.nodes),
            rel_tol: c.rel_tol.unwrap_or(d.rel_tol),
        }
    }

    pub fn mc_config(&self) -> McConfig {
        let d = McConfig::default();
        let m = &self.mc;
        McConfig {
            dt: m.dt.unwrap_or(d.dt),
            n_paths: m.paths.unwrap_or(d.n_paths),
            seed: m.seed.unwrap_or(d.seed),
            boundary_eps: m.boundary_eps.unwrap_or(d.boundary_eps),
            max_steps: m.max_steps.unwrap_or(d.max_steps),
            step_growth: m.step_growth.unwrap_or(d.step_growth),
            overshoot_correction: m.overshoot_correction.unwrap_or(d.overshoot_correction),
        }
    }

    pub fn bins(&self) -> usize {
        self.mc.bins.unwrap_or(20)
    }
}

/// Value of a required point parameter.
pub fn need<T: Copy>(v: Option<T>, name: &str, command: Command) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("{} needs --{name}", command.name())))
}
