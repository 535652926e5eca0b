//! Poisson kernel of the horocycle `H_1 = {x_n > 1}` for hyperbolic Brownian
//! motion in the half-space model.
//!
//! The exit law is that of Brownian motion killed at rate
//! `n(n-2)/(8 W_n^2)`; its exit time measure `mu` has the Laplace transform
//! `sqrt(x) K_nu(x sqrt(2w)) / K_nu(sqrt(2w))`, `nu = (n-1)/2`, and the
//! kernel is the Gaussian mixture of `mu`. Two real-line representations are
//! used:
//!
//! * K-form, `rho >= x - 1`:
//!   `x^nu / (2^{nu-1} pi^{nu+1} rho^{nu-1}) int R(x,t) t^nu K_{nu-1}(t rho) dt`
//!   with the cross ratio `R` of [`bessel_cross`];
//! * Hankel form, `rho < x - 1` and `rho = 0`:
//!   `(2 pi)^{-nu} x^nu rho^{1-nu} int e^{-(x-1)t} [K~_nu(xt)/K~_nu(t)] t^nu J_{nu-1}(rho t) dt`
//!   with `K~ = e^t K`, which is the radial Fourier inversion of the same
//!   mixture.

use crate::error::{Error, Result};
use crate::quad::{integrate_panels, integrate_to_inf, Tolerance};
use crate::specfun::{bessel_cross, bessel_j, bessel_k_real, bessel_k_scaled, gamma_real, Order};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Number of points in the coarse scan that sizes the integrand.
const SCAN_POINTS: usize = 64;
/// Panels per unit of the decay length in the truncated integrals.
const PANELS_PER_SCALE: f64 = 1.0;

/// Evaluation point `(n, x_n, |y|)` of `P(x_n, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceQuery {
    pub n: u32,
    pub x_n: f64,
    pub rho: f64,
}

impl HalfSpaceQuery {
    pub fn new(n: u32, x_n: f64, rho: f64) -> Result<Self> {
        let q = HalfSpaceQuery { n, x_n, rho };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Domain(format!(
                "dimension must be >= 3, got {}",
                self.n
            )));
        }
        if !(self.x_n > 1.0) || !self.x_n.is_finite() {
            return Err(Error::Domain(format!("x_n must be > 1, got {}", self.x_n)));
        }
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return Err(Error::Domain(format!("|y| must be >= 0, got {}", self.rho)));
        }
        Ok(())
    }

    /// `nu = (n-1)/2`.
    pub fn order(&self) -> Order {
        Order::halfspace(self.n)
    }
}

/// A query on the horocycle `H_a`: start `x` (last coordinate `x_n > a`)
/// and boundary point `y` in `R^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledQuery {
    pub a: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ScaledQuery {
    pub fn new(a: f64, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let q = ScaledQuery { a, x, y };
        q.reduce()?;
        Ok(q)
    }

    /// The level-1 query and the factor `a^{1-n}`:
    /// `P_a(x, y) = a^{1-n} P((x_n/a), |y - x~|/a)`.
    pub fn reduce(&self) -> Result<(HalfSpaceQuery, f64)> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::Domain(format!(
                "level a must be > 0, got {}",
                self.a
            )));
        }
        let n = self.x.len();
        if n < 3 || self.y.len() + 1 != n {
            return Err(Error::Domain(format!(
                "need x in R^n (n >= 3) and y in R^(n-1), got {} and {}",
                n,
                self.y.len()
            )));
        }
        let x_n = self.x[n - 1];
        if !(x_n > self.a) {
            return Err(Error::Domain(format!(
                "x_n = {x_n} must exceed a = {}",
                self.a
            )));
        }
        let rho = self.x[..n - 1]
            .iter()
            .zip(&self.y)
            .map(|(xi, yi)| (yi - xi) * (yi - xi))
            .sum::<f64>()
            .sqrt();
        let q = HalfSpaceQuery::new(n as u32, x_n / self.a, rho / self.a)?;
        Ok((q, self.a.powi(1 - n as i32)))
    }
}

/// Tolerances for the real-line integrals.
///
/// `abs_tol` and `tail_cutoff` are relative to the integrand scale
/// `max|f| * L` measured by a coarse scan over the truncated range of
/// length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
            tail_cutoff: 1e-17,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 1e-12) || !(self.tail_cutoff > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature spec needs abs_tol > 0, rel_tol >= 1e-12, tail_cutoff > 0, got {self:?}"
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self, scale: f64) -> Tolerance {
        Tolerance {
            abs: self.abs_tol * scale,
            rel: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// `sqrt(x_n) K_nu(x_n sqrt(2w)) / K_nu(sqrt(2w))` for `w` off `(-inf, 0)`;
/// the value at `w = 0` is the limit `x_n^{(2-n)/2}`.
pub fn laplace_mu(q: &HalfSpaceQuery, w: Complex64) -> Result<Complex64> {
    q.validate()?;
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {w}")));
    }
    let nu = q.order().value();
    let x = q.x_n;
    if w == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(x.powf(0.5 - nu), 0.0));
    }
    if w.im == 0.0 && w.re < 0.0 {
        return Err(Error::BranchCut(format!(
            "Laplace transform argument {w} on the negative axis"
        )));
    }
    let s = (w * 2.0).sqrt();
    let ratio = bessel_k_scaled(nu, s * x)? / bessel_k_scaled(nu, s)?;
    Ok(ratio * (-(x - 1.0) * s).exp() * x.sqrt())
}

/// Bounded integrand sizing: the scan maximum of |f| and a truncation point
/// past which `bound(t) < cutoff * max|f| * t`.
fn truncate<F, B>(f: &F, bound: B, length: f64, spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let mut fmax = 0.0f64;
    for k in 1..=SCAN_POINTS {
        let t = length * k as f64 / SCAN_POINTS as f64;
        fmax = fmax.max(f(t).abs());
    }
    if fmax == 0.0 || !fmax.is_finite() {
        return Err(Error::Quadrature(format!(
            "integrand scan gave max |f| = {fmax}"
        )));
    }
    let mut t = length;
    for _ in 0..200 {
        if bound(t) < spec.tail_cutoff * fmax * t {
            return Ok((fmax, t));
        }
        t *= 1.25;
    }
    Err(Error::Quadrature(
        "could not locate a truncation point".into(),
    ))
}

fn panel_breaks(end: f64, scale: f64) -> Vec<f64> {
    let count = ((end / scale) * PANELS_PER_SCALE).ceil().max(1.0) as usize;
    (0..=count).map(|k| end * k as f64 / count as f64).collect()
}

/// Bound constant `C` with `|R(x, t)| <= C (1 + t)`, from a scan.
fn cross_bound(nu: Order, x: f64, length: f64) -> Result<f64> {
    let mut c = 0.0f64;
    for k in 1..=SCAN_POINTS {
        let t = length * k as f64 / SCAN_POINTS as f64;
        c = c.max(bessel_cross(nu, x, t)?.abs() / (1.0 + t));
    }
    // the envelope of R tends to 1/sqrt(x) for large t
    Ok(c.max(1.0 / x.sqrt()) * 2.0)
}

/// Density of `mu_{x_n}` at `s > 0`:
/// `(sqrt(x_n)/pi) int R(x_n, t) t e^{-s t^2/2} dt`.
pub fn mu_density(q: &HalfSpaceQuery, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    spec.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("mu density needs s > 0, got {s}")));
    }
    let nu = q.order();
    let x = q.x_n;
    let width = 1.0 / s.sqrt();
    let f = |t: f64| bessel_cross(nu, x, t).unwrap_or(f64::NAN) * t * (-0.5 * s * t * t).exp();
    let c = cross_bound(nu, x, 8.0 * width)?;
    let bound = |t: f64| c * (1.0 + t) * t * (-0.5 * s * t * t).exp();
    let (fmax, end) = truncate(&f, bound, 4.0 * width, spec)?;
    let scale = width.min(PI / (x - 1.0));
    let r = integrate_panels(f, &panel_breaks(end, scale), spec.tolerance(fmax * end))?;
    Ok(x.sqrt() / PI * r.value)
}

/// Large-s behaviour of the density, `(sqrt(x)/pi) R0 Gamma(nu+1) 2^nu s^{-nu-1}`
/// with `R0 = lim R(x,t)/t^{2nu}` at `t = 0`.
pub fn mu_density_tail(q: &HalfSpaceQuery, s: f64) -> Result<f64> {
    q.validate()?;
    let nu = q.order();
    let v = nu.value();
    let r0 = (q.x_n - 1.0) * crate::specfun::g_nu_limit_t0(nu, q.x_n);
    Ok(q.x_n.sqrt() / PI * r0 * gamma_real(v + 1.0)? * 2f64.powf(v) * s.powf(-v - 1.0))
}

/// Numerical Laplace transform `int_0^inf e^{-w s} mu(s) ds` of [`mu_density`].
pub fn mu_transform(q: &HalfSpaceQuery, w: f64, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    if !(w >= 0.0) || !w.is_finite() {
        return Err(Error::Domain(format!("transform needs w >= 0, got {w}")));
    }
    let inner = QuadratureSpec {
        rel_tol: spec.rel_tol.max(1e-11),
        ..*spec
    };
    let g = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let e = (-w * s).exp();
        if e == 0.0 {
            return 0.0;
        }
        e * mu_density(q, s, &inner).unwrap_or(f64::NAN)
    };
    let tol = Tolerance {
        abs: 1e-13,
        rel: 1e-9,
        max_subdivisions: spec.max_subdivisions,
    };
    let r = integrate_to_inf(g, 0.0, tol)?;
    Ok(r.value)
}

/// Poisson kernel `P(x_n, y)` of `H_1` with respect to Lebesgue measure on
/// the boundary.
pub fn poisson_kernel(q: &HalfSpaceQuery, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    spec.validate()?;
    if q.rho >= q.x_n - 1.0 {
        kernel_k_form(q, spec)
    } else {
        kernel_hankel_form(q, spec)
    }
}

/// Kernel on `H_a` through the scaling and translation reduction.
pub fn poisson_kernel_scaled(q: &ScaledQuery, spec: &QuadratureSpec) -> Result<f64> {
    let (base, factor) = q.reduce()?;
    Ok(factor * poisson_kernel(&base, spec)?)
}

fn kernel_k_form(q: &HalfSpaceQuery, spec: &QuadratureSpec) -> Result<f64> {
    let nu = q.order();
    let v = nu.value();
    let (x, rho) = (q.x_n, q.rho);
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let k = bessel_k_real(v - 1.0, t * rho).unwrap_or(f64::NAN);
        bessel_cross(nu, x, t).unwrap_or(f64::NAN) * t.powf(v) * k
    };
    let decay = 1.0 / rho;
    let c = cross_bound(nu, x, 8.0 * decay)?;
    let bound = |t: f64| c * (1.0 + t) * t.powf(v) * bessel_k_real(v - 1.0, t * rho).unwrap_or(0.0);
    let (fmax, end) = truncate(&f, bound, 4.0 * decay, spec)?;
    let r = integrate_panels(f, &panel_breaks(end, decay), spec.tolerance(fmax * end))?;
    let pref = x.powf(v) / (2f64.powf(v - 1.0) * PI.powf(v + 1.0) * rho.powf(v - 1.0));
    Ok(pref * r.value)
}

fn kernel_hankel_form(q: &HalfSpaceQuery, spec: &QuadratureSpec) -> Result<f64> {
    let v = q.order().value();
    let (x, rho) = (q.x_n, q.rho);
    let gv = gamma_real(v)?;
    // rho^{1-nu} J_{nu-1}(rho t), with its rho = 0 limit (t/2)^{nu-1}/Gamma(nu)
    let radial = |t: f64| -> f64 {
        let z = rho * t;
        if z < 1e-8 {
            (t / 2.0).powf(v - 1.0) / gv * (1.0 - z * z / (4.0 * v))
        } else {
            rho.powf(1.0 - v) * bessel_j(v - 1.0, z).unwrap_or(f64::NAN)
        }
    };
    let ratio = |t: f64| -> f64 {
        let a = bessel_k_scaled(v, Complex64::new(x * t, 0.0));
        let b = bessel_k_scaled(v, Complex64::new(t, 0.0));
        match (a, b) {
            (Ok(a), Ok(b)) => a.re / b.re,
            _ => f64::NAN,
        }
    };
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        (-(x - 1.0) * t).exp() * ratio(t) * t.powf(v) * radial(t)
    };
    let decay = 1.0 / (x - 1.0);
    let envelope = (rho.max(1e-300)).powf(1.0 - v).max(1.0);
    let bound = |t: f64| {
        let j = if rho > 0.0 {
            (2.0 / (PI * rho * t)).sqrt().min((t / 2.0).powf(v - 1.0))
        } else {
            (t / 2.0).powf(v - 1.0)
        };
        (-(x - 1.0) * t).exp() * t.powf(v) * j * envelope * 2.0
    };
    let (fmax, end) = truncate(&f, bound, 4.0 * decay, spec)?;
    let r = integrate_panels(f, &panel_breaks(end, decay), spec.tolerance(fmax * end))?;
    Ok((2.0 * PI).powf(-v) * x.powf(v) * r.value)
}

/// Area of the unit sphere in `R^{n-1}`.
fn boundary_sphere_area(n: u32) -> f64 {
    let v = (n as f64 - 1.0) / 2.0;
    2.0 * PI.powf(v) / gamma_real(v).unwrap()
}

/// Total mass `int_{R^{n-1}} P(x_n, y) dy` by radial quadrature.
pub fn normalization(n: u32, x_n: f64, spec: &QuadratureSpec) -> Result<f64> {
    HalfSpaceQuery::new(n, x_n, 0.0)?;
    let m = n as f64 - 2.0;
    let kernel = |rho: f64| {
        let q = HalfSpaceQuery { n, x_n, rho };
        rho.powf(m) * poisson_kernel(&q, spec).unwrap_or(f64::NAN)
    };
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-10,
        max_subdivisions: spec.max_subdivisions,
    };
    let split = x_n - 1.0;
    let near = crate::quad::integrate(kernel, 0.0, split, tol)?;
    let far = integrate_to_inf(kernel, split, tol)?;
    Ok(boundary_sphere_area(n) * (near.value + far.value))
}

/// The large-|y| constant in the form
/// `Gamma(n/2) / (2^{n-2} pi^{n/2}) sum_{k=0}^{n-2} x0^k`.
pub fn asym_large_y_as_stated(n: u32, x0: f64) -> Result<f64> {
    check_x0(n, x0)?;
    let nf = n as f64;
    Ok(gamma_real(nf / 2.0)? / (2f64.powf(nf - 2.0) * PI.powf(nf / 2.0)) * power_sum(n, x0))
}

/// `lim P(x_n, y) |y|^{2n-2} / (x_n - 1)` as `x_n -> x0`, `|y| -> inf`:
/// `2^{n-2} Gamma(n/2) / pi^{n/2} sum_{k=0}^{n-2} x0^k`.
pub fn asym_large_y(n: u32, x0: f64) -> Result<f64> {
    check_x0(n, x0)?;
    let nf = n as f64;
    Ok(2f64.powf(nf - 2.0) * gamma_real(nf / 2.0)? / PI.powf(nf / 2.0) * power_sum(n, x0))
}

fn check_x0(n: u32, x0: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::Domain(format!("dimension must be >= 3, got {n}")));
    }
    if !(x0 >= 1.0) || !x0.is_finite() {
        return Err(Error::Domain(format!("x0 must be >= 1, got {x0}")));
    }
    Ok(())
}

fn power_sum(n: u32, x0: f64) -> f64 {
    (0..=n - 2).map(|k| x0.powi(k as i32)).sum()
}

/// `c(y0) = y0^{(1-n)/2} int_0^inf s^nu K_{nu-1}(s y0) / (J_nu^2(s) + Y_nu^2(s)) ds`.
pub fn asym_boundary_c(n: u32, y0: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if n < 3 {
        return Err(Error::Domain(format!("dimension must be >= 3, got {n}")));
    }
    if !(y0 > 0.0) || !y0.is_finite() {
        return Err(Error::Domain(format!("y0 must be > 0, got {y0}")));
    }
    let nu = Order::halfspace(n);
    let v = nu.value();
    // 1/(J^2 + Y^2) = (pi/2) t^{2nu} g_nu(1, t)
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        let inv_mod =
            crate::specfun::g_nu_limit_x1(nu, t).unwrap_or(f64::NAN) * PI / 2.0 * t.powf(2.0 * v);
        t.powf(v) * bessel_k_real(v - 1.0, t * y0).unwrap_or(f64::NAN) * inv_mod
    };
    let decay = 1.0 / y0;
    let bound =
        |t: f64| (1.0 + t) * t.powf(v) * bessel_k_real(v - 1.0, t * y0).unwrap_or(0.0) * 4.0;
    let (fmax, end) = truncate(&f, bound, 4.0 * decay, spec)?;
    let r = integrate_panels(f, &panel_breaks(end, decay), spec.tolerance(fmax * end))?;
    Ok(y0.powf(-v) * r.value)
}

/// `lim P(x_n, y) / (x_n - 1)` as `x_n -> 1`, `|y| -> y0`:
/// `y0 c(y0) / (pi^{(n+3)/2} 2^{(n-5)/2})`.
pub fn asym_boundary_limit(n: u32, y0: f64, spec: &QuadratureSpec) -> Result<f64> {
    let nf = n as f64;
    Ok(y0 * asym_boundary_c(n, y0, spec)?
        / (PI.powf((nf + 3.0) / 2.0) * 2f64.powf((nf - 5.0) / 2.0)))
}

/// One grid point of [`bounds_ratio_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsPoint {
    pub x_n: f64,
    pub rho: f64,
    pub ratio: f64,
}

/// Extremes of `P |y|^{2n-2} / (x_n - 1)` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub points: Vec<BoundsPoint>,
    pub min: f64,
    pub max: f64,
}

/// Evaluates `P(x_n, y) |y|^{2n-2} / (x_n - 1)` on the grid
/// `x_values x rho_values`, `x_n` in `(1, 2]`, `rho >= 1`.
pub fn bounds_ratio_scan(
    n: u32,
    x_values: &[f64],
    rho_values: &[f64],
    spec: &QuadratureSpec,
) -> Result<BoundsReport> {
    if x_values.is_empty() || rho_values.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    for &x in x_values {
        if !(x > 1.0 && x <= 2.0) {
            return Err(Error::Domain(format!(
                "grid x_n must lie in (1, 2], got {x}"
            )));
        }
    }
    for &r in rho_values {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(Error::Domain(format!("grid |y| must be >= 1, got {r}")));
        }
    }
    let grid: Vec<(f64, f64)> = x_values
        .iter()
        .flat_map(|&x| rho_values.iter().map(move |&r| (x, r)))
        .collect();
    let points = grid
        .par_iter()
        .map(|&(x_n, rho)| {
            let p = poisson_kernel(&HalfSpaceQuery::new(n, x_n, rho)?, spec)?;
            Ok(BoundsPoint {
                x_n,
                rho,
                ratio: p * rho.powi(2 * n as i32 - 2) / (x_n - 1.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    let max = points
        .iter()
        .map(|p| p.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundsReport { points, min, max })
}
