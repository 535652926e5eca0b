use crate::stream::{ExitStream, PathSampler};
use crate::{ExitSample, McConfig, McError, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Diffusion whose exit law from the ball `|x| < r` is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallMode {
    /// Hyperbolic Brownian motion in the Poincare ball, `r < 1`: drift
    /// `(n-2) x / (1 - |x|^2)`, weight `exp(-n(n-2)/2 int ds / (1 - |W|^2)^2)`.
    Hyperbolic,
    /// `Delta/2 + lambda x . grad`: drift `lambda x`, weight
    /// `exp(-int (lambda^2 |W|^2 / 2 + n lambda / 2) ds)`.
    Ou { lambda: f64 },
    /// As [`BallMode::Ou`] with the weight
    /// `exp(-int (lambda^2 |W|^2 + 2 n lambda) ds / 2)`.
    OuAsPrinted { lambda: f64 },
    /// Plain Brownian motion, unit weight.
    Brownian,
}

impl BallMode {
    fn validate(&self, r: f64) -> Result<()> {
        match *self {
            BallMode::Hyperbolic if !(r < 1.0) => Err(McError::InvalidConfig(format!(
                "hyperbolic ball needs r < 1, got {r}"
            ))),
            BallMode::Ou { lambda } | BallMode::OuAsPrinted { lambda }
                if !(lambda > 0.0) || !lambda.is_finite() =>
            {
                Err(McError::InvalidConfig(format!(
                    "lambda must be > 0, got {lambda}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Killing rate at `|w|^2 = s`.
    fn potential(&self, n: f64, s: f64) -> f64 {
        match *self {
            BallMode::Hyperbolic => n * (n - 2.0) / 2.0 / ((1.0 - s) * (1.0 - s)),
            BallMode::Ou { lambda } => lambda * lambda * s / 2.0 + n * lambda / 2.0,
            BallMode::OuAsPrinted { lambda } => lambda * lambda * s / 2.0 + n * lambda,
            BallMode::Brownian => 0.0,
        }
    }

    /// Drift coefficient `c` in `b(x) = c x` at `|x|^2 = s`.
    fn drift(&self, n: f64, s: f64) -> f64 {
        match *self {
            BallMode::Hyperbolic => (n - 2.0) / (1.0 - s),
            BallMode::Ou { lambda } | BallMode::OuAsPrinted { lambda } => lambda,
            BallMode::Brownian => 0.0,
        }
    }

    /// Factor turning mean weights into harmonic measure.
    pub fn prefactor(&self, n: u32, r: f64, x_norm: f64) -> f64 {
        let nu = n as f64 / 2.0 - 1.0;
        match *self {
            BallMode::Hyperbolic => ((1.0 - x_norm * x_norm) / (1.0 - r * r)).powf(nu),
            BallMode::Ou { lambda } | BallMode::OuAsPrinted { lambda } => {
                (lambda * (r * r - x_norm * x_norm) / 2.0).exp()
            }
            BallMode::Brownian => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
struct BallSetup {
    n: usize,
    r: f64,
    x_norm: f64,
    mode: BallMode,
    cfg: McConfig,
}

impl BallSetup {
    fn new(n: u32, r: f64, x_norm: f64, mode: BallMode, cfg: McConfig) -> Result<Self> {
        cfg.validate()?;
        if n < 3 {
            return Err(McError::InvalidConfig(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "radius must be > 0, got {r}"
            )));
        }
        if !(x_norm > 0.0 && x_norm < r) {
            return Err(McError::InvalidConfig(format!(
                "|x| must lie in (0, r), got {x_norm}"
            )));
        }
        if cfg.stop_offset(1.0) >= r - x_norm {
            return Err(McError::InvalidConfig(
                "boundary_eps reaches the starting point".into(),
            ));
        }
        mode.validate(r)?;
        Ok(BallSetup {
            n: n as usize,
            r,
            x_norm,
            mode,
            cfg,
        })
    }

    /// Runs one path; `drifted` selects the SDE, otherwise Brownian motion
    /// with the Feynman-Kac weight.
    fn run(&self, path: u64, rng: &mut ChaCha8Rng, drifted: bool) -> Result<ExitSample> {
        let cfg = &self.cfg;
        let nf = self.n as f64;
        let level = self.r - cfg.stop_offset(1.0);
        let mut w = vec![0.0; self.n];
        w[0] = self.x_norm;
        let mut dw = vec![0.0; self.n];
        let mut s = self.x_norm * self.x_norm;
        let (mut t, mut clock, mut killing) = (0.0, 0.0, 0.0);
        let mut steps = 0;
        loop {
            if steps >= cfg.max_steps {
                return Err(McError::BudgetExceeded { path, steps });
            }
            let norm = s.sqrt();
            let mut h = cfg.step_at(self.r - norm);
            if cfg.step_growth > 0.0 {
                // resolve the clock integrand near the origin
                h = h.min(cfg.step_growth * s).max(f64::MIN_POSITIVE);
            }
            let sh = h.sqrt();
            let c = if drifted {
                self.mode.drift(nf, s) * h
            } else {
                0.0
            };
            for (d, wi) in dw.iter_mut().zip(&w) {
                *d = c * wi + sh * rng.sample::<f64, _>(StandardNormal);
            }
            let s_next: f64 = w.iter().zip(&dw).map(|(a, b)| (a + b) * (a + b)).sum();
            let frac = if s_next >= level * level {
                // |w + f dw| = level
                let a: f64 = dw.iter().map(|d| d * d).sum();
                let b: f64 = 2.0 * w.iter().zip(&dw).map(|(x, d)| x * d).sum::<f64>();
                let c = s - level * level;
                (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a)
            } else {
                1.0
            };
            t += frac * h;
            clock += frac * h / s;
            if !drifted {
                killing += frac * h * self.mode.potential(nf, s);
            }
            steps += 1;
            if frac < 1.0 {
                let scale = self.r / level;
                let exit_point = w
                    .iter()
                    .zip(&dw)
                    .map(|(x, d)| (x + frac * d) * scale)
                    .collect();
                return Ok(ExitSample {
                    exit_point,
                    exit_time: t,
                    fk_weight: (-killing).exp(),
                    aux_clock: clock,
                });
            }
            for (x, d) in w.iter_mut().zip(&dw) {
                *x += d;
            }
            s = s_next;
        }
    }
}

/// Brownian motion from `(|x|, 0, ..., 0)` weighted by the killing rate of
/// `mode` and stopped on the sphere of radius `r`.
#[derive(Debug, Clone)]
pub struct BallFk(BallSetup);

/// Euler-Maruyama for the drifted diffusion of `mode`, unit weights.
#[derive(Debug, Clone)]
pub struct BallSde(BallSetup);

impl BallFk {
    pub fn new(n: u32, r: f64, x_norm: f64, mode: BallMode, cfg: McConfig) -> Result<Self> {
        Ok(BallFk(BallSetup::new(n, r, x_norm, mode, cfg)?))
    }

    pub fn prefactor(&self) -> f64 {
        self.0
            .mode
            .prefactor(self.0.n as u32, self.0.r, self.0.x_norm)
    }
}

impl BallSde {
    pub fn new(n: u32, r: f64, x_norm: f64, mode: BallMode, cfg: McConfig) -> Result<Self> {
        Ok(BallSde(BallSetup::new(n, r, x_norm, mode, cfg)?))
    }
}

impl PathSampler for BallFk {
    fn sample_path(&self, path: u64, rng: &mut ChaCha8Rng) -> Result<ExitSample> {
        self.0.run(path, rng, false)
    }
}

impl PathSampler for BallSde {
    fn sample_path(&self, path: u64, rng: &mut ChaCha8Rng) -> Result<ExitSample> {
        self.0.run(path, rng, true)
    }
}

/// Weighted Brownian exit samples for a ball.
pub fn sample_ball_fk(
    n: u32,
    r: f64,
    x_norm: f64,
    cfg: McConfig,
    mode: BallMode,
) -> Result<ExitStream<BallFk>> {
    ExitStream::new(BallFk::new(n, r, x_norm, mode, cfg)?, cfg)
}

/// Direct simulation of the drifted diffusion in a ball.
pub fn sample_ball_sde(
    n: u32,
    r: f64,
    x_norm: f64,
    cfg: McConfig,
    mode: BallMode,
) -> Result<ExitStream<BallSde>> {
    ExitStream::new(BallSde::new(n, r, x_norm, mode, cfg)?, cfg)
}
