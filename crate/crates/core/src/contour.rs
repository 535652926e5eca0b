//! Bromwich-line quadrature shared by the ball kernels.
//!
//! Both ball kernels have the form
//!
//! ```text
//! P(phi) = C * pref * (1/(2 pi i)) * int_{c - i inf}^{c + i inf} L(w) G(-w; cos phi) dw
//! ```
//!
//! where `L` is the Laplace transform of the clock measure and `G` the
//! Green function of the angular process. `G(-w)` has simple poles at
//! `w_k = k (2 nu + k) / 2`, k = 0, 1, ...; the integral is taken on a line
//! strictly between `w_0 = 0` and `w_1`, and the residue at `w = 0` (which
//! is `L(0) / m` with `m` the total speed measure) accounts for the shift
//! from a line left of the origin. The integrand is conjugate symmetric, so
//! only the upper half-line is summed (trapezoid rule).

use crate::ball_hyperbolic::green_scaled;
use crate::error::{Error, Result};
use crate::quad::pairwise_sum;
use crate::specfun::gamma_real;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Nodes closer than this to a pole of the integrand trigger a shift of the line.
pub const POLE_GUARD: f64 = 1e-8;
/// Shift applied to the abscissa when a node sits on a pole.
pub const POLE_SHIFT: f64 = 1e-3;
/// Below this angle (n >= 4) the kernel is interpolated in phi^2.
pub const PHI_INTERP: f64 = 0.02;
/// Smallest angle evaluated directly for n = 3.
pub const PHI_MIN: f64 = 1e-9;
/// Target decay exponent of the integrand at the truncation height.
const DECAY: f64 = 36.0;
const HEIGHT_MIN: f64 = 200.0;
const HEIGHT_MAX: f64 = 20_000.0;
/// Trapezoid step as a fraction of the distance to the nearest pole.
const STEP_FRACTION: f64 = 1.0 / 6.0;
/// Absolute accuracy requested from each product L(w) G(-w) on the line;
/// the kernel bracket is O(1), so smaller errors are invisible in the sum.
const TERM_ABS_TOL: f64 = 1e-15;
/// Largest relative error of a Green function value accepted on the line.
const TERM_RELIABLE: f64 = 1e-2;
/// Relative tolerance of the conjugate-symmetry spot check.
const CONJ_TOL: f64 = 1e-8;

/// Bromwich line and truncation parameters. `None` selects the automatic
/// choice: abscissa midway between the first two poles, height from the
/// decay rate of the integrand, step a sixth of the pole distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Abscissa of the line.
    pub c: Option<f64>,
    /// Truncation height (the segment is `[c - iH, c + iH]`).
    pub height: Option<f64>,
    /// Number of trapezoid nodes on the full segment (odd).
    pub nodes: Option<usize>,
    /// Tolerance for the truncation-tail estimate.
    pub rel_tol: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            c: None,
            height: None,
            nodes: None,
            rel_tol: 1e-6,
        }
    }
}

impl ContourSpec {
    /// Line `c = -nu^2/4`, `H = 200`, 4001 nodes.
    pub fn classic(n: u32) -> Self {
        let nu = n as f64 / 2.0 - 1.0;
        ContourSpec {
            c: Some(-nu * nu / 4.0),
            height: Some(200.0),
            nodes: Some(4001),
            rel_tol: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.height {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Domain(format!(
                    "contour height must be > 0, got {h}"
                )));
            }
        }
        if let Some(k) = self.nodes {
            if k < 3 {
                return Err(Error::Domain(format!(
                    "contour needs at least 3 nodes, got {k}"
                )));
            }
        }
        if let Some(c) = self.c {
            if !c.is_finite() {
                return Err(Error::Domain("contour abscissa must be finite".into()));
            }
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Total mass of the speed measure of the angular process,
/// `2 sqrt(pi) Gamma((n-1)/2) / Gamma(n/2)`.
pub fn speed_mass(n: u32) -> f64 {
    let n = n as f64;
    2.0 * PI.sqrt() * gamma_real((n - 1.0) / 2.0).unwrap() / gamma_real(n / 2.0).unwrap()
}

/// Poles of `G(-w)` on the real axis: `k (n - 2 + k) / 2`.
pub fn green_pole(n: u32, k: u32) -> f64 {
    let k = k as f64;
    k * (n as f64 - 2.0 + k) / 2.0
}

/// Precomputed Laplace-transform values on the Bromwich line for one
/// (n, r, |x|) triple; evaluates the contour integral for any angle.
#[derive(Debug, Clone)]
pub struct ContourKernel {
    n: u32,
    c: f64,
    step: f64,
    residue: Complex64,
    /// Decay rate `ln(r/|x|)` of the transform along the line.
    kappa: f64,
    fixed_height: Option<f64>,
    rel_tol: f64,
    lmu: Vec<Complex64>,
    /// Spot values of the transform at conjugate nodes, for the symmetry check.
    conj_spots: Vec<(usize, Complex64)>,
}

impl ContourKernel {
    /// `lmu` is the clock Laplace transform `w -> L(w)`, analytic for
    /// `Re w > -nu^2/2`; `kappa > 0` its exponential decay rate in `sqrt|w|`.
    pub fn new<F>(n: u32, spec: &ContourSpec, kappa: f64, lmu: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64> + Sync,
    {
        spec.validate()?;
        if n < 3 {
            return Err(Error::Domain(format!("dimension must be >= 3, got {n}")));
        }
        let nu = n as f64 / 2.0 - 1.0;
        let w1 = green_pole(n, 1);
        let mut c = spec.c.unwrap_or(w1 / 2.0);
        if c <= -nu * nu / 2.0 {
            return Err(Error::Domain(format!(
                "abscissa {c} left of the branch point {}",
                -nu * nu / 2.0
            )));
        }
        if c >= w1 - POLE_GUARD {
            return Err(Error::Domain(format!(
                "abscissa {c} right of the pole at {w1}"
            )));
        }
        if (0..2).any(|k| (c - green_pole(n, k)).abs() < POLE_GUARD) {
            log::warn!(
                "contour abscissa {c} on a pole of the integrand; shifting by -{POLE_SHIFT}"
            );
            c -= POLE_SHIFT;
        }
        let residue = if c > 0.0 {
            lmu(Complex64::new(0.0, 0.0))? / speed_mass(n)
        } else {
            Complex64::new(0.0, 0.0)
        };
        let pole_dist = if c > 0.0 {
            c.min(w1 - c)
        } else {
            (-c).min(w1 - c)
        };
        let fixed_height = spec.height;
        let h_max = fixed_height.unwrap_or_else(|| auto_height(kappa, 0.0));
        let step = match spec.nodes {
            Some(k) => 2.0 * h_max / (k - 1) as f64,
            None => pole_dist * STEP_FRACTION,
        };
        let count = (h_max / step).round() as usize + 1;
        let lmu_vals: Vec<Complex64> = (0..count)
            .into_par_iter()
            .map(|k| lmu(Complex64::new(c, k as f64 * step)))
            .collect::<Result<_>>()?;
        if lmu_vals
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::Contour(
                "non-finite Laplace transform on the contour".into(),
            ));
        }
        let spots = [1usize, count / 3, (2 * count) / 3];
        let mut conj_spots = Vec::new();
        for &k in spots.iter().filter(|&&k| k > 0 && k < count) {
            let v = lmu(Complex64::new(c, -(k as f64) * step))?;
            let want = lmu_vals[k].conj();
            if (v - want).norm() > CONJ_TOL * want.norm().max(1e-300) && (v - want).norm() > 1e-300
            {
                return Err(Error::Contour(format!(
                    "Laplace transform not conjugate symmetric at node {k}: {v} vs {want}"
                )));
            }
            conj_spots.push((k, v));
        }
        Ok(ContourKernel {
            n,
            c,
            step,
            residue,
            kappa,
            fixed_height,
            rel_tol: spec.rel_tol,
            lmu: lmu_vals,
            conj_spots,
        })
    }

    /// Abscissa actually used (after any pole shift).
    pub fn abscissa(&self) -> f64 {
        self.c
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of nodes on the half-line `[c, c + iH_max]`.
    pub fn node_count(&self) -> usize {
        self.lmu.len()
    }

    /// `(1/(2 pi i)) int L(w) G(-w; cos phi) dw` for `phi` in `(0, pi]`.
    ///
    /// The sum stops early at the first node where the Green function
    /// loses accuracy (large |w| at small angles); the omitted part is then
    /// bounded through the decay `exp(-(kappa + phi) sqrt(Im w))` of the
    /// integrand. Fails when the truncation tail plus the accumulated
    /// evaluation error exceed `rel_tol` of the result.
    pub fn integral(&self, phi: f64) -> Result<f64> {
        let (z, wz) = half_angle(phi);
        let nu = self.n as f64 / 2.0 - 1.0;
        let height = self
            .fixed_height
            .unwrap_or_else(|| auto_height(self.kappa, phi));
        let count = ((height / self.step).round() as usize + 1).min(self.lmu.len());
        let terms: Vec<(f64, f64, f64)> = (0..count)
            .into_par_iter()
            .map(|k| {
                let w = Complex64::new(self.c, k as f64 * self.step);
                let l = self.lmu[k];
                let tol = TERM_ABS_TOL / l.norm().max(1e-300);
                let (g, err) = green_scaled(self.n, nu, w, z, wz, tol)?;
                let weight = if k == 0 { 0.5 } else { 1.0 };
                Ok((
                    weight * (l * g).re,
                    weight * (l * g).norm(),
                    weight * err * l.norm(),
                ))
            })
            .collect::<Result<_>>()?;
        let cut = terms
            .iter()
            .position(|&(_, size, err)| err > TERM_RELIABLE * size)
            .unwrap_or(count);
        if cut < 2 {
            return Err(Error::Contour(format!(
                "Green function inaccurate on the whole line at phi = {phi}"
            )));
        }
        let terms = &terms[..cut];
        for &(k, lconj) in &self.conj_spots {
            if k >= cut {
                continue;
            }
            let w = Complex64::new(self.c, k as f64 * self.step);
            let f = self.lmu[k] * green_scaled(self.n, nu, w, z, wz, 0.0)?.0;
            let fc = lconj * green_scaled(self.n, nu, w.conj(), z, wz, 0.0)?.0;
            if (fc - f.conj()).norm() > CONJ_TOL * f.norm().max(1e-300)
                && (fc - f.conj()).norm() > 1e-300
            {
                return Err(Error::Contour(format!(
                    "imaginary residual at node {k}: {fc} vs conj {}",
                    f.conj()
                )));
            }
        }
        let values: Vec<f64> = terms.iter().map(|t| t.0).collect();
        let body = pairwise_sum(&values) * self.step / PI;
        let total = self.residue.re + body;
        let window = (cut / 50).max(1);
        let last = &terms[cut - window..];
        let tail = if cut < count {
            let size = last.iter().map(|t| t.1).sum::<f64>() / window as f64;
            let a = (self.kappa + phi).max(1e-12);
            let y = cut as f64 * self.step;
            size * 2.0 * (y.sqrt() / a + 1.0 / (a * a)) / PI
        } else {
            last.iter().map(|t| t.0.abs()).sum::<f64>() * self.step / PI
        };
        let eval_err = terms.iter().map(|t| t.2).sum::<f64>() * self.step / PI;
        if tail + eval_err > self.rel_tol * total.abs().max(1e-300) {
            return Err(Error::Contour(format!(
                "truncation tail {tail:.3e} and evaluation error {eval_err:.3e} exceed rel_tol {} of {total:.6e} at phi = {phi}",
                self.rel_tol
            )));
        }
        Ok(total)
    }

    /// Contour integral with the small-angle treatment: for n = 3 the angle
    /// is clamped at [`PHI_MIN`]; for n >= 4 values below [`PHI_INTERP`] are
    /// interpolated by a quadratic in phi^2 through 1, 2 and 3 times
    /// `PHI_INTERP`.
    pub fn integral_smooth(&self, phi: f64) -> Result<f64> {
        let phi = reduce_angle(phi)?;
        if self.n == 3 {
            return self.integral(phi.max(PHI_MIN));
        }
        if phi >= PHI_INTERP {
            return self.integral(phi);
        }
        let xs = [PHI_INTERP, 2.0 * PHI_INTERP, 3.0 * PHI_INTERP];
        let mut ys = [0.0; 3];
        for (y, &x) in ys.iter_mut().zip(&xs) {
            *y = self.integral(x)?;
        }
        let t = phi * phi;
        let ts = xs.map(|x| x * x);
        let mut out = 0.0;
        for i in 0..3 {
            let mut l = 1.0;
            for j in 0..3 {
                if j != i {
                    l *= (t - ts[j]) / (ts[i] - ts[j]);
                }
            }
            out += l * ys[i];
        }
        Ok(out)
    }
}

/// Angle folded into `[0, pi]` (the kernels depend on cos phi only).
pub fn reduce_angle(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::Domain(format!("angle must be finite, got {phi}")));
    }
    let t = phi.rem_euclid(2.0 * PI);
    Ok(if t > PI { 2.0 * PI - t } else { t })
}

/// `((1 + cos phi)/2, (1 - cos phi)/2)` without cancellation.
pub fn half_angle(phi: f64) -> (f64, f64) {
    let c = (0.5 * phi).cos();
    let s = (0.5 * phi).sin();
    (c * c, s * s)
}

fn auto_height(kappa: f64, phi: f64) -> f64 {
    let a = (kappa + phi).max(1e-12);
    (DECAY / a).powi(2).clamp(HEIGHT_MIN, HEIGHT_MAX)
}
