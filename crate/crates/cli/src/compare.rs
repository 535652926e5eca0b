//! Monte Carlo histograms against the closed-form kernels.

use crate::error::Result;
use crate::output::{Cell, Table};
use harmeas_core::ball_hyperbolic::BallKernel;
use harmeas_core::ball_ou::{poisson_kernel_ou_as_printed, OuBallKernel, OuBallQuery};
use harmeas_core::contour::ContourSpec;
use harmeas_core::halfspace::{poisson_kernel, HalfSpaceQuery, QuadratureSpec};
use harmeas_core::quad::gauss_legendre_on;
use harmeas_core::specfun::gamma_real;
use harmeas_mc::{
    collect, estimate_density, estimate_functional, sample_ball_fk, sample_ball_sde,
    sample_halfspace_fk, sample_hyperbolic_sde, z_scores, z_scores_against, BallMode, Bins,
    DensityEstimate, McConfig, MeanEstimate, SampleSet, WeightedValue,
};
use std::f64::consts::PI;

/// Gauss-Legendre nodes per bin for kernel bin averages.
const BIN_NODES: usize = 10;

/// Ball problem compared by [`ball_comparison`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallProblem {
    Hyperbolic,
    Ou { lambda: f64 },
}

/// Histograms of one exit law from the kernel and from both samplers.
///
/// Half-space histograms are in the radius `|y|`, ball histograms in the
/// cosine of the angle between the exit point and the start.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub bins: Bins,
    /// Kernel bin averages.
    pub kernel: Vec<f64>,
    /// Bin averages of the printed OU closed form, where it is defined.
    pub kernel_as_printed: Option<Vec<f64>>,
    /// Weighted Brownian estimate, prefactor applied.
    pub fk: DensityEstimate,
    /// Direct simulation of the drifted diffusion.
    pub sde: DensityEstimate,
    /// Total mass of the weighted Brownian estimate.
    pub fk_mass: MeanEstimate,
    /// Total mass with the printed OU killing rate.
    pub fk_as_printed_mass: Option<MeanEstimate>,
    pub z_fk_kernel: Vec<f64>,
    pub z_sde_kernel: Vec<f64>,
    pub z_fk_sde: Vec<f64>,
    /// Paths that hit the step budget, per sampler.
    pub budget_failures: [u64; 2],
    /// Raw samples, kept for export.
    pub samples: Option<[SampleSet; 2]>,
}

impl Comparison {
    fn new(
        bins: Bins,
        kernel: Vec<f64>,
        fk: DensityEstimate,
        sde: DensityEstimate,
        fk_mass: MeanEstimate,
        budget_failures: [u64; 2],
    ) -> harmeas_mc::Result<Self> {
        Ok(Comparison {
            z_fk_kernel: z_scores_against(&fk, &kernel)?,
            z_sde_kernel: z_scores_against(&sde, &kernel)?,
            z_fk_sde: z_scores(&fk, &sde)?,
            bins,
            kernel,
            kernel_as_printed: None,
            fk,
            sde,
            fk_mass,
            fk_as_printed_mass: None,
            budget_failures,
            samples: None,
        })
    }

    /// Largest `|z|` over all bins and all three pairings.
    pub fn max_abs_z(&self) -> f64 {
        self.z_fk_kernel
            .iter()
            .chain(&self.z_sde_kernel)
            .chain(&self.z_fk_sde)
            .fold(0.0, |m, z| m.max(z.abs()))
    }

    pub fn max_abs(z: &[f64]) -> f64 {
        z.iter().fold(0.0, |m, z| m.max(z.abs()))
    }

    /// One row per bin.
    pub fn table(&self) -> Table {
        let mut cols = vec![
            "bin",
            "lo",
            "hi",
            "kernel",
            "fk",
            "fk_se",
            "sde",
            "sde_se",
            "z_fk_kernel",
            "z_sde_kernel",
            "z_fk_sde",
        ];
        if self.kernel_as_printed.is_some() {
            cols.push("kernel_as_printed");
        }
        let mut t = Table::new(&cols);
        for k in 0..self.bins.count {
            let mut row: Vec<Cell> = vec![
                k.into(),
                self.fk.edges[k].into(),
                self.fk.edges[k + 1].into(),
                self.kernel[k].into(),
                self.fk.values[k].into(),
                self.fk.std_errors[k].into(),
                self.sde.values[k].into(),
                self.sde.std_errors[k].into(),
                self.z_fk_kernel[k].into(),
                self.z_sde_kernel[k].into(),
                self.z_fk_sde[k].into(),
            ];
            if let Some(p) = &self.kernel_as_printed {
                row.push(p[k].into());
            }
            t.push(row);
        }
        t
    }
}

fn scale_density(mut d: DensityEstimate, c: f64) -> DensityEstimate {
    d.values.iter_mut().for_each(|v| *v *= c);
    d.std_errors.iter_mut().for_each(|v| *v *= c);
    d
}

/// Area of the unit sphere in `R^{n-1}`.
fn sphere_area_below(n: u32) -> f64 {
    let v = (n as f64 - 1.0) / 2.0;
    2.0 * PI.powf(v) / gamma_real(v).unwrap()
}

/// Average of `f` over each bin.
fn bin_averages<F>(edges: &[f64], f: F) -> harmeas_core::Result<Vec<f64>>
where
    F: Fn(f64) -> harmeas_core::Result<f64>,
{
    edges
        .windows(2)
        .map(|e| {
            let (xs, ws) = gauss_legendre_on(BIN_NODES, e[0], e[1]);
            let mut s = 0.0;
            for (x, w) in xs.iter().zip(&ws) {
                s += w * f(*x)?;
            }
            Ok(s / (e[1] - e[0]))
        })
        .collect()
}

/// Bin averages of the exit law in `u = cos(phi)`, integrating in `phi`.
fn ball_bin_averages<F>(n: u32, r: f64, bins: &Bins, kernel: F) -> harmeas_core::Result<Vec<f64>>
where
    F: Fn(f64) -> harmeas_core::Result<f64>,
{
    let omega = sphere_area_below(n);
    let nf = n as f64;
    bins.edges()
        .windows(2)
        .map(|e| {
            let (a, b) = (e[1].min(1.0).acos(), e[0].max(-1.0).acos());
            let (xs, ws) = gauss_legendre_on(BIN_NODES, a, b);
            let mut s = 0.0;
            for (phi, w) in xs.iter().zip(&ws) {
                s += w * phi.sin().powf(nf - 2.0) * kernel(*phi)?;
            }
            Ok(omega * r.powf(nf - 1.0) * s / (e[1] - e[0]))
        })
        .collect()
}

/// Radial exit histogram on `[0, rho_max]` for the half-space started at
/// height `x_n`.
pub fn halfspace_comparison(
    n: u32,
    x_n: f64,
    rho_max: f64,
    bins: usize,
    cfg: McConfig,
    spec: &QuadratureSpec,
    keep_samples: bool,
) -> Result<Comparison> {
    HalfSpaceQuery::new(n, x_n, 0.0)?;
    let bins = Bins::new(0.0, rho_max, bins)?;
    let omega = sphere_area_below(n);
    let m = n as f64 - 2.0;
    let kernel = bin_averages(&bins.edges(), |rho| {
        Ok(omega * rho.powf(m) * poisson_kernel(&HalfSpaceQuery::new(n, x_n, rho)?, spec)?)
    })?;

    let fk_stream = sample_halfspace_fk(n, x_n, cfg)?;
    let pref = x_n.powf(m / 2.0);
    let fk_set = collect(fk_stream)?;
    let mut start = vec![0.0; n as usize];
    start[n as usize - 1] = x_n;
    let sde_set = collect(sample_hyperbolic_sde(&start, cfg)?)?;

    let radius = |p: &[f64]| p.iter().map(|v| v * v).sum::<f64>().sqrt();
    let fk_points: Vec<WeightedValue> = fk_set
        .samples
        .iter()
        .map(|s| WeightedValue {
            value: radius(&s.exit_point),
            weight: s.fk_weight,
        })
        .collect();
    let sde_points: Vec<WeightedValue> = sde_set
        .samples
        .iter()
        .map(|s| WeightedValue {
            value: radius(&s.exit_point),
            weight: 1.0,
        })
        .collect();
    let fk = scale_density(estimate_density(&fk_points, &bins)?, pref);
    let sde = estimate_density(&sde_points, &bins)?;
    let fk_mass = estimate_functional(&fk_set, |_| 1.0)?.scaled(pref);
    let mut out = Comparison::new(
        bins,
        kernel,
        fk,
        sde,
        fk_mass,
        [fk_set.budget_failures, sde_set.budget_failures],
    )?;
    if keep_samples {
        out.samples = Some([fk_set, sde_set]);
    }
    Ok(out)
}

/// Angular exit histogram in `cos(phi)` on `[-1, 1]` for the ball of
/// radius `r` started at distance `x_norm` from the centre.
#[allow(clippy::too_many_arguments)]
pub fn ball_comparison(
    problem: BallProblem,
    n: u32,
    r: f64,
    x_norm: f64,
    bins: usize,
    cfg: McConfig,
    spec: &ContourSpec,
    keep_samples: bool,
) -> Result<Comparison> {
    let bins = Bins::new(-1.0, 1.0, bins)?;
    let (kernel, mode, printed) = match problem {
        BallProblem::Hyperbolic => {
            let k = BallKernel::new(n, r, x_norm, spec)?;
            (
                ball_bin_averages(n, r, &bins, |phi| k.eval(phi))?,
                BallMode::Hyperbolic,
                None,
            )
        }
        BallProblem::Ou { lambda } => {
            let k = OuBallKernel::new(n, lambda, r, x_norm, spec)?;
            let kernel = ball_bin_averages(n, r, &bins, |phi| k.eval(phi))?;
            let printed = if r < 1.0 {
                let s = ContourSpec::classic(n);
                Some(ball_bin_averages(n, r, &bins, |phi| {
                    poisson_kernel_ou_as_printed(&OuBallQuery::new(n, lambda, r, x_norm, phi)?, &s)
                })?)
            } else {
                None
            };
            (kernel, BallMode::Ou { lambda }, printed)
        }
    };

    let cosine = |p: &[f64]| p[0] / r;
    let fk_set = collect(sample_ball_fk(n, r, x_norm, cfg, mode)?)?;
    let sde_set = collect(sample_ball_sde(n, r, x_norm, cfg, mode)?)?;
    let pref = mode.prefactor(n, r, x_norm);
    let fk_points: Vec<WeightedValue> = fk_set
        .samples
        .iter()
        .map(|s| WeightedValue {
            value: cosine(&s.exit_point),
            weight: s.fk_weight,
        })
        .collect();
    let sde_points: Vec<WeightedValue> = sde_set
        .samples
        .iter()
        .map(|s| WeightedValue {
            value: cosine(&s.exit_point),
            weight: 1.0,
        })
        .collect();
    let fk = scale_density(estimate_density(&fk_points, &bins)?, pref);
    let sde = estimate_density(&sde_points, &bins)?;
    let fk_mass = estimate_functional(&fk_set, |_| 1.0)?.scaled(pref);
    let mut out = Comparison::new(
        bins,
        kernel,
        fk,
        sde,
        fk_mass,
        [fk_set.budget_failures, sde_set.budget_failures],
    )?;
    out.kernel_as_printed = printed;
    if let BallProblem::Ou { lambda } = problem {
        let printed_mode = BallMode::OuAsPrinted { lambda };
        let set = collect(sample_ball_fk(n, r, x_norm, cfg, printed_mode)?)?;
        out.fk_as_printed_mass =
            Some(estimate_functional(&set, |_| 1.0)?.scaled(printed_mode.prefactor(n, r, x_norm)));
    }
    if keep_samples {
        out.samples = Some([fk_set, sde_set]);
    }
    Ok(out)
}
