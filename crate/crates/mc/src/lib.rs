//! Monte Carlo exit samplers for the half-space and ball problems.
//!
//! Two kinds of sampler are provided for each geometry: Brownian motion with
//! a Feynman-Kac weight, and direct Euler-Maruyama simulation of the drifted
//! diffusion. Both estimate the same harmonic measure.
//!
//! Every path draws from its own ChaCha8 stream, selected by the path index,
//! and paths are reduced in index order, so results are bit-identical for a
//! fixed seed whatever the thread count.

mod ball;
mod estimate;
mod halfspace;
mod stream;

pub use ball::{sample_ball_fk, sample_ball_sde, BallFk, BallMode, BallSde};
pub use estimate::{
    estimate_density, estimate_functional, estimate_laplace_functional, mean_and_error, z_scores,
    z_scores_against, Bins, DensityEstimate, Functional, MeanEstimate, WeightedValue,
};
pub use halfspace::{sample_halfspace_fk, sample_hyperbolic_sde, HalfSpaceFk, HyperbolicSde};
pub use stream::{collect, ExitStream, PathSampler, SampleSet};

use thiserror::Error;

/// Failures of the Monte Carlo layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("path {path} did not exit within {steps} steps")]
    BudgetExceeded { path: u64, steps: u64 },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, McError>;

/// Crate version, recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Simulation controls.
///
/// Far from the boundary the time step grows to `step_growth * d^2`, with
/// `d` the distance to the boundary, and never drops below `dt`; setting
/// `step_growth = 0` gives a fixed step. A path is stopped when it comes
/// within `boundary_eps` of the boundary; with `overshoot_correction` the
/// stopping level moves a further `0.5826 sigma sqrt(dt)` inward, `sigma` the
/// noise scale at the boundary, which removes the leading `O(sqrt(dt))`
/// error of checking for exit only at grid times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub dt: f64,
    pub n_paths: u64,
    pub seed: u64,
    pub boundary_eps: f64,
    pub max_steps: u64,
    pub step_growth: f64,
    pub overshoot_correction: bool,
}

/// `E max` of the ladder overshoot of a Gaussian random walk, `-zeta(1/2)/sqrt(2 pi)`.
pub const OVERSHOOT: f64 = 0.5826;

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            dt: 1e-4,
            n_paths: 100_000,
            seed: 0,
            boundary_eps: 0.0,
            max_steps: 10_000_000,
            step_growth: 0.02,
            overshoot_correction: true,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if self.n_paths == 0 {
            return Err(McError::InvalidConfig("n_paths must be >= 1".into()));
        }
        if !(self.boundary_eps >= 0.0) || !self.boundary_eps.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "boundary_eps must be >= 0, got {}",
                self.boundary_eps
            )));
        }
        if self.max_steps == 0 {
            return Err(McError::InvalidConfig("max_steps must be >= 1".into()));
        }
        if !(self.step_growth >= 0.0) || !self.step_growth.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "step_growth must be >= 0, got {}",
                self.step_growth
            )));
        }
        Ok(())
    }

    /// Time step at distance `d` from the boundary.
    pub(crate) fn step_at(&self, d: f64) -> f64 {
        self.dt.max(self.step_growth * d * d)
    }

    /// Distance from the boundary at which paths stop, for noise scale `sigma`.
    pub fn stop_offset(&self, sigma: f64) -> f64 {
        let shift = if self.overshoot_correction {
            OVERSHOOT * sigma * self.dt.sqrt()
        } else {
            0.0
        };
        self.boundary_eps + shift
    }
}

/// One exited path.
///
/// `exit_point` holds the boundary coordinates: the `n-1` horizontal
/// coordinates for the half-space, the full point on the sphere for a ball.
/// `aux_clock` is `int ds / |W|^2` for ball samplers and zero otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitSample {
    pub exit_point: Vec<f64>,
    pub exit_time: f64,
    pub fk_weight: f64,
    pub aux_clock: f64,
}
