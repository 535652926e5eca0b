use crate::{ExitSample, McError, Result, SampleSet};

/// Smallest sample accepted by [`estimate_density`].
const MIN_SAMPLES: usize = 100;

/// A scalar statistic of one path with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedValue {
    pub value: f64,
    pub weight: f64,
}

/// `count` equal bins on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bins {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Bins {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(McError::InvalidConfig(format!(
                "bad bins [{lo}, {hi}] x {count}"
            )));
        }
        Ok(Bins { lo, hi, count })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.count)
            .map(|k| self.lo + self.width() * k as f64)
            .collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.count)
            .map(|k| self.lo + self.width() * (k as f64 + 0.5))
            .collect()
    }

    /// Bin of `v`; the upper edge belongs to the last bin.
    pub fn index(&self, v: f64) -> Option<usize> {
        if !(v >= self.lo && v <= self.hi) {
            return None;
        }
        Some((((v - self.lo) / self.width()) as usize).min(self.count - 1))
    }
}

/// Histogram density estimate with per-bin standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub samples: usize,
}

/// Weighted histogram `(1/N) sum w_i 1[v_i in bin] / width`; values outside
/// the support still count in `N`. Standard errors are those of the mean of
/// the per-path contributions.
pub fn estimate_density(points: &[WeightedValue], bins: &Bins) -> Result<DensityEstimate> {
    if points.len() < MIN_SAMPLES {
        return Err(McError::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: points.len(),
        });
    }
    let width = bins.width();
    let mut sum = vec![0.0; bins.count];
    let mut sum_sq = vec![0.0; bins.count];
    for p in points {
        if let Some(k) = bins.index(p.value) {
            let c = p.weight / width;
            sum[k] += c;
            sum_sq[k] += c * c;
        }
    }
    let nf = points.len() as f64;
    let values: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let std_errors = values
        .iter()
        .zip(&sum_sq)
        .map(|(m, q)| ((q / nf - m * m).max(0.0) / (nf - 1.0)).sqrt())
        .collect();
    Ok(DensityEstimate {
        grid: bins.centers(),
        edges: bins.edges(),
        values,
        std_errors,
        samples: points.len(),
    })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MeanEstimate {
    pub fn scaled(self, c: f64) -> Self {
        MeanEstimate {
            mean: self.mean * c,
            std_error: self.std_error * c.abs(),
            samples: self.samples,
        }
    }

    /// `(mean - target) / std_error`.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.std_error
    }
}

/// Mean and standard error of a sequence, summed in order.
pub fn mean_and_error<I: IntoIterator<Item = f64>>(values: I) -> Result<MeanEstimate> {
    let (mut n, mut s, mut q) = (0usize, 0.0, 0.0);
    for v in values {
        n += 1;
        s += v;
        q += v * v;
    }
    if n < 2 {
        return Err(McError::InsufficientSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = s / nf;
    let var = (q / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok(MeanEstimate {
        mean,
        std_error: (var / nf).sqrt(),
        samples: n,
    })
}

/// Random time entering a Laplace functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// The exit time.
    Time,
    /// The clock `int ds / |W|^2`.
    Clock,
}

/// `E[fk_weight * f(sample)]` over the exited paths.
pub fn estimate_functional<F: Fn(&ExitSample) -> f64>(
    set: &SampleSet,
    f: F,
) -> Result<MeanEstimate> {
    mean_and_error(set.samples.iter().map(|s| s.fk_weight * f(s)))
}

/// `E[fk_weight * exp(-w T)]` with `T` the exit time or the clock, `w >= 0`.
pub fn estimate_laplace_functional(
    set: &SampleSet,
    w: f64,
    functional: Functional,
) -> Result<MeanEstimate> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(McError::InvalidConfig(format!("w must be >= 0, got {w}")));
    }
    estimate_functional(set, |s| {
        let t = match functional {
            Functional::Time => s.exit_time,
            Functional::Clock => s.aux_clock,
        };
        (-w * t).exp()
    })
}

/// Per-bin `(a - b) / sqrt(se_a^2 + se_b^2)`; bins where both errors
/// vanish give 0 when the values agree and infinity otherwise.
pub fn z_scores(a: &DensityEstimate, b: &DensityEstimate) -> Result<Vec<f64>> {
    if a.edges != b.edges {
        return Err(McError::InvalidConfig(
            "histograms use different bins".into(),
        ));
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .zip(a.std_errors.iter().zip(&b.std_errors))
        .map(|((x, y), (sx, sy))| ratio(x - y, (sx * sx + sy * sy).sqrt()))
        .collect())
}

/// Per-bin `(estimate - exact) / se` against exact bin averages.
pub fn z_scores_against(a: &DensityEstimate, exact: &[f64]) -> Result<Vec<f64>> {
    if exact.len() != a.values.len() {
        return Err(McError::InvalidConfig(
            "exact values do not match the bins".into(),
        ));
    }
    Ok(a.values
        .iter()
        .zip(exact)
        .zip(&a.std_errors)
        .map(|((x, e), s)| ratio(x - e, *s))
        .collect())
}

fn ratio(d: f64, s: f64) -> f64 {
    if s > 0.0 {
        d / s
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}
