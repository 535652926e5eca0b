//! Command-line front end: evaluate kernels, tabulate them, and run the
//! validation suites.
//!
//! A run is described by a [`RunConfig`], built from flags, from a JSON
//! file given with `--config`, or both (flags win). Exit status is 0 on
//! success, 2 when a validation tolerance is exceeded and 1 on usage, input
//! or numerical errors.

pub mod commands;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod selftest;

pub use commands::execute;
pub use config::{Command, Geometry, RunConfig};
pub use error::{CliError, Result, EXIT_ERROR, EXIT_OK, EXIT_VALIDATION};
pub use output::Outcome;

use clap::{Args, Parser, Subcommand};
use config::{Constant, Format, Regime, Variant};
use std::ffi::OsString;
use std::path::PathBuf;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "HARMEAS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "harmeas",
    version,
    about = "Harmonic measure kernels of hyperbolic and OU diffusions"
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Kernel at one point.
    Eval(Flags),
    /// Kernel on a grid of |y| (half-space) or angles (balls).
    Tabulate(Flags),
    /// Half-space kernel against its large-|y| or boundary limit.
    ValidateAsymptotics(Flags),
    /// Total mass of the exit law.
    ValidateNormalization(Flags),
    /// Monte Carlo exit histograms against the kernel.
    McCompare(Flags),
    /// Special-function identity checks.
    SpecfunSelftest(Flags),
}

impl Sub {
    fn split(self) -> (Command, Flags) {
        match self {
            Sub::Eval(f) => (Command::Eval, f),
            Sub::Tabulate(f) => (Command::Tabulate, f),
            Sub::ValidateAsymptotics(f) => (Command::ValidateAsymptotics, f),
            Sub::ValidateNormalization(f) => (Command::ValidateNormalization, f),
            Sub::McCompare(f) => (Command::McCompare, f),
            Sub::SpecfunSelftest(f) => (Command::SpecfunSelftest, f),
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    #[arg(long, value_enum)]
    pub geometry: Option<Geometry>,
    /// Dimension.
    #[arg(long)]
    pub n: Option<u32>,
    /// Height of the start point (half-space).
    #[arg(long)]
    pub xn: Option<f64>,
    /// Horizontal distance |y| of the exit point (half-space).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Ball radius.
    #[arg(long)]
    pub r: Option<f64>,
    /// Norm of the start point (balls).
    #[arg(long)]
    pub xnorm: Option<f64>,
    /// Angle between start and exit point (balls).
    #[arg(long)]
    pub phi: Option<f64>,
    /// OU drift coefficient.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// OU closed form.
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,

    #[arg(long)]
    pub grid_min: Option<f64>,
    /// Grid end; for `mc-compare` on the half-space, the histogram range in |y|.
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,

    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    #[arg(long)]
    pub tail_cutoff: Option<f64>,
    #[arg(long)]
    pub contour_c: Option<f64>,
    #[arg(long)]
    pub contour_height: Option<f64>,
    #[arg(long)]
    pub contour_nodes: Option<usize>,
    #[arg(long)]
    pub contour_rel_tol: Option<f64>,

    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub paths: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub boundary_eps: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub step_growth: Option<f64>,
    /// Stop paths exactly at the boundary instead of the shifted level.
    #[arg(long)]
    pub no_overshoot_correction: bool,
    #[arg(long)]
    pub bins: Option<usize>,

    /// Validation tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest accepted |z| in `mc-compare`.
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long, value_enum)]
    pub constant: Option<Constant>,
    #[arg(long, value_enum)]
    pub regime: Option<Regime>,
    /// Gauss-Legendre nodes for ball masses.
    #[arg(long)]
    pub nodes: Option<usize>,

    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write raw exit samples of `mc-compare` to this CSV file.
    #[arg(long)]
    pub samples_out: Option<PathBuf>,
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl Flags {
    /// Overrides `cfg` with every flag given.
    pub fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.geometry, self.geometry);
        let p = &mut cfg.point;
        set(&mut p.n, self.n);
        set(&mut p.xn, self.xn);
        set(&mut p.rho, self.rho);
        set(&mut p.r, self.r);
        set(&mut p.xnorm, self.xnorm);
        set(&mut p.phi, self.phi);
        set(&mut p.lambda, self.lambda);
        set(&mut cfg.variant, self.variant);
        set(&mut cfg.grid.min, self.grid_min);
        set(&mut cfg.grid.max, self.grid_max);
        set(&mut cfg.grid.points, self.points);
        let q = &mut cfg.quadrature;
        set(&mut q.abs_tol, self.abs_tol);
        set(&mut q.rel_tol, self.rel_tol);
        set(&mut q.max_subdivisions, self.max_subdivisions);
        set(&mut q.tail_cutoff, self.tail_cutoff);
        let c = &mut cfg.contour;
        set(&mut c.c, self.contour_c);
        set(&mut c.height, self.contour_height);
        set(&mut c.nodes, self.contour_nodes);
        set(&mut c.rel_tol, self.contour_rel_tol);
        let m = &mut cfg.mc;
        set(&mut m.dt, self.dt);
        set(&mut m.paths, self.paths);
        set(&mut m.seed, self.seed);
        set(&mut m.boundary_eps, self.boundary_eps);
        set(&mut m.max_steps, self.max_steps);
        set(&mut m.step_growth, self.step_growth);
        if self.no_overshoot_correction {
            m.overshoot_correction = Some(false);
        }
        set(&mut m.bins, self.bins);
        let v = &mut cfg.validation;
        set(&mut v.tol, self.tol);
        set(&mut v.z_max, self.z_max);
        set(&mut v.constant, self.constant);
        set(&mut v.regime, self.regime);
        set(&mut v.nodes, self.nodes);
        set(&mut cfg.output.path, self.output);
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        set(&mut cfg.output.samples, self.samples_out);
    }
}

/// Builds the run configuration from parsed arguments.
pub fn resolve(cli: Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(path) => Some(RunConfig::from_json(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    match (file, cli.command) {
        (None, None) => Err(CliError::Usage("a command or --config is required".into())),
        (Some(cfg), None) => Ok(cfg),
        (None, Some(sub)) => {
            let (command, flags) = sub.split();
            let mut cfg = RunConfig::new(command);
            flags.apply(&mut cfg);
            Ok(cfg)
        }
        (Some(mut cfg), Some(sub)) => {
            let (command, flags) = sub.split();
            if command != cfg.command {
                return Err(CliError::Usage(format!(
                    "command {} conflicts with {} in the config file",
                    command.name(),
                    cfg.command.name()
                )));
            }
            flags.apply(&mut cfg);
            Ok(cfg)
        }
    }
}

/// Parses `args`, runs the command, writes the output and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = resolve(cli).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        output::emit(&cfg, &outcome)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(e) => {
            eprintln!("harmeas: {e}");
            EXIT_ERROR
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {v:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {v:?}"
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
