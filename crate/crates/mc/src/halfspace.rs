use crate::stream::{ExitStream, PathSampler};
use crate::{ExitSample, McConfig, McError, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Standard Brownian motion from `(0, ..., 0, x_n)` weighted by
/// `exp(-n(n-2)/8 int ds / W_n^2)` and stopped at `W_n = 1`.
///
/// Only the vertical coordinate is stepped; the horizontal exit point is
/// drawn exactly as `sqrt(tau) * N(0, I)` given the exit time.
#[derive(Debug, Clone)]
pub struct HalfSpaceFk {
    n: usize,
    x_n: f64,
    cfg: McConfig,
}

impl HalfSpaceFk {
    pub fn new(n: u32, x_n: f64, cfg: McConfig) -> Result<Self> {
        cfg.validate()?;
        if n < 3 {
            return Err(McError::InvalidConfig(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        if !(x_n > 1.0) || !x_n.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "x_n must be > 1, got {x_n}"
            )));
        }
        Ok(HalfSpaceFk {
            n: n as usize,
            x_n,
            cfg,
        })
    }

    /// Factor `x_n^{(n-2)/2}` turning mean weights into harmonic measure.
    pub fn prefactor(&self) -> f64 {
        self.x_n.powf((self.n as f64 - 2.0) / 2.0)
    }
}

impl PathSampler for HalfSpaceFk {
    fn sample_path(&self, path: u64, rng: &mut ChaCha8Rng) -> Result<ExitSample> {
        let cfg = &self.cfg;
        let level = 1.0 + cfg.stop_offset(1.0);
        let mut w = self.x_n;
        let mut t = 0.0;
        let mut clock = 0.0;
        let mut steps = 0;
        while w > level {
            if steps >= cfg.max_steps {
                return Err(McError::BudgetExceeded { path, steps });
            }
            let h = cfg.step_at(w - 1.0);
            let xi: f64 = rng.sample(StandardNormal);
            let next = w + h.sqrt() * xi;
            let frac = if next <= level {
                (w - level) / (w - next)
            } else {
                1.0
            };
            clock += frac * h / (w * w);
            t += frac * h;
            w = next;
            steps += 1;
        }
        let nf = self.n as f64;
        let sd = t.sqrt();
        let exit_point = (0..self.n - 1)
            .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
            .collect();
        Ok(ExitSample {
            exit_point,
            exit_time: t,
            fk_weight: (-nf * (nf - 2.0) / 8.0 * clock).exp(),
            aux_clock: 0.0,
        })
    }
}

/// Euler-Maruyama for the half-space system
/// `dY_i = Y_n dB_i`, `dY_n = Y_n dB_n - (n-2) Y_n dt`, with `B` of variance
/// `2t`, stopped at `Y_n = 1`.
///
/// Given the path of `Y_n` the horizontal increments are Gaussian with
/// variance `2 int Y_n^2 ds`, which is accumulated instead of stepping them.
#[derive(Debug, Clone)]
pub struct HyperbolicSde {
    start: Vec<f64>,
    cfg: McConfig,
}

impl HyperbolicSde {
    pub fn new(start: &[f64], cfg: McConfig) -> Result<Self> {
        cfg.validate()?;
        if start.len() < 3 {
            return Err(McError::InvalidConfig(format!(
                "dimension must be >= 3, got {}",
                start.len()
            )));
        }
        let x_n = start[start.len() - 1];
        if !(x_n > 1.0) || !x_n.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "start must satisfy x_n > 1, got {x_n}"
            )));
        }
        Ok(HyperbolicSde {
            start: start.to_vec(),
            cfg,
        })
    }
}

impl PathSampler for HyperbolicSde {
    fn sample_path(&self, path: u64, rng: &mut ChaCha8Rng) -> Result<ExitSample> {
        let cfg = &self.cfg;
        let n = self.start.len();
        let drift = n as f64 - 2.0;
        // noise scale sqrt(2) Y_n = sqrt(2) at the boundary
        let level = 1.0 + cfg.stop_offset(2f64.sqrt());
        let mut y = self.start[n - 1];
        let mut t = 0.0;
        let mut var = 0.0;
        let mut steps = 0;
        while y > level {
            if steps >= cfg.max_steps {
                return Err(McError::BudgetExceeded { path, steps });
            }
            let h = cfg.step_at((y - 1.0) / y);
            let xi: f64 = rng.sample(StandardNormal);
            let next = y + y * (2.0 * h).sqrt() * xi - drift * y * h;
            let frac = if next <= level {
                (y - level) / (y - next)
            } else {
                1.0
            };
            var += frac * 2.0 * h * y * y;
            t += frac * h;
            y = next;
            steps += 1;
        }
        let sd = var.sqrt();
        let exit_point = self.start[..n - 1]
            .iter()
            .map(|s| s + sd * rng.sample::<f64, _>(StandardNormal))
            .collect();
        Ok(ExitSample {
            exit_point,
            exit_time: t,
            fk_weight: 1.0,
            aux_clock: 0.0,
        })
    }
}

/// Weighted Brownian exit samples for the half-space.
pub fn sample_halfspace_fk(n: u32, x_n: f64, cfg: McConfig) -> Result<ExitStream<HalfSpaceFk>> {
    ExitStream::new(HalfSpaceFk::new(n, x_n, cfg)?, cfg)
}

/// Direct simulation of hyperbolic Brownian motion in the half-space.
pub fn sample_hyperbolic_sde(start: &[f64], cfg: McConfig) -> Result<ExitStream<HyperbolicSde>> {
    ExitStream::new(HyperbolicSde::new(start, cfg)?, cfg)
}
