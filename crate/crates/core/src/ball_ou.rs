//! Poisson kernel of a centered ball for the Ornstein-Uhlenbeck type
//! operator `Delta/2 + lambda x . grad`, lambda > 0.
//!
//! The exit law is that of Brownian motion weighted by
//! `exp(-int (lambda^2 |W|^2 / 2 + n lambda / 2) ds)` and multiplied by
//! `exp(lambda (r^2 - |x|^2) / 2)`; the angular part is the same as for the
//! hyperbolic ball, so the kernel reuses [`ContourKernel`] with a
//! Whittaker-type clock transform.

use crate::ball_hyperbolic::{coef_a, coef_b};
use crate::contour::{half_angle, reduce_angle, ContourKernel, ContourSpec};
use crate::error::{Error, Result};
use crate::quad::pairwise_sum;
use crate::specfun::{gamma_real, hyp1f1, legendre_p, whittaker_m};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Point of evaluation for the OU ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuBallQuery {
    pub n: u32,
    pub lambda: f64,
    pub r: f64,
    pub x_norm: f64,
    pub phi: f64,
}

impl OuBallQuery {
    pub fn new(n: u32, lambda: f64, r: f64, x_norm: f64, phi: f64) -> Result<Self> {
        let q = OuBallQuery {
            n,
            lambda,
            r,
            x_norm,
            phi,
        };
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
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::Domain(format!(
                "lambda must be > 0, got {}",
                self.lambda
            )));
        }
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::Domain(format!("radius must be > 0, got {}", self.r)));
        }
        if !(self.x_norm >= 0.0 && self.x_norm < self.r) {
            return Err(Error::Domain(format!(
                "|x| must lie in [0, r), got {}",
                self.x_norm
            )));
        }
        reduce_angle(self.phi)?;
        Ok(())
    }
}

/// Which closed form to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuVariant {
    /// Prefactor `exp(lambda (r^2 - |x|^2)/2)`, potential `n lambda / 2`,
    /// Green function at `-z`.
    #[default]
    Derived,
    /// The closed form as printed: hyperbolic-type prefactor
    /// `((1-|x|^2)/(1-r^2))^{(n-2)/2}`, Whittaker index `k = -n/2`, `B_n(z)`
    /// and the Legendre function at `A(z)`, on the line `c = -(n-2)^2/16`.
    AsPrinted,
}

/// Whittaker index of the clock transform, `k = -n/4`.
pub fn whittaker_index(n: u32) -> f64 {
    -(n as f64) / 4.0
}

/// `mu(w) = sqrt((n-2)^2 + 8w)/4`, principal branch.
pub fn whittaker_mu(n: u32, w: Complex64) -> Complex64 {
    (Complex64::new(((n as f64) - 2.0).powi(2), 0.0) + w * 8.0).sqrt() * 0.25
}

/// Laplace transform of the weighted clock measure,
/// `(r/y)^{n/2} M_{k,mu(w)}(lambda y^2) / M_{k,mu(w)}(lambda r^2)`, k = -n/4,
/// for `Re w > -(n-2)^2/8`.
pub fn laplace_mu_ou(q: &OuBallQuery, w: Complex64) -> Result<Complex64> {
    q.validate()?;
    check_half_plane(q.n, w)?;
    if q.x_norm == 0.0 {
        return Err(Error::Domain("clock transform needs |x| > 0".into()));
    }
    lmu_ou(q.n, q.lambda, q.r, q.x_norm, w)
}

/// The transform with the printed Whittaker index `k = -n/2`.
pub fn laplace_mu_ou_as_printed(q: &OuBallQuery, w: Complex64) -> Result<Complex64> {
    q.validate()?;
    check_half_plane(q.n, w)?;
    let k = -(q.n as f64) / 2.0;
    let mu = whittaker_mu(q.n, w);
    let num = whittaker_m(k, mu, q.lambda * q.x_norm * q.x_norm)?;
    let den = whittaker_m(k, mu, q.lambda * q.r * q.r)?;
    Ok(num / den * (q.r / q.x_norm).powf(q.n as f64 / 2.0))
}

fn check_half_plane(n: u32, w: Complex64) -> Result<()> {
    let b = -((n as f64) - 2.0).powi(2) / 8.0;
    if !(w.re > b) || !w.im.is_finite() {
        return Err(Error::Domain(format!(
            "Laplace transform needs Re w > {b}, got {w}"
        )));
    }
    Ok(())
}

/// Equivalent form free of the large common factors of the two Whittaker
/// values: `e^{-lambda (y^2 - r^2)/2} (y/r)^{A - nu} M(a, 1 + A, lambda y^2) / M(a, 1 + A, lambda r^2)`
/// with `A = 2 mu`, `a = 1 + (A + nu)/2`.
pub(crate) fn lmu_ou(n: u32, lambda: f64, r: f64, y: f64, w: Complex64) -> Result<Complex64> {
    let nu = n as f64 / 2.0 - 1.0;
    let a = whittaker_mu(n, w) * 2.0;
    let p = (a + nu) * 0.5 + 1.0;
    let ratio = hyp1f1(p, a + 1.0, lambda * y * y)? / hyp1f1(p, a + 1.0, lambda * r * r)?;
    let pow = ((a - nu) * (y / r).ln()).exp();
    Ok(ratio * pow * (-lambda * (y * y - r * r) / 2.0).exp())
}

/// OU ball Poisson kernel for fixed (n, lambda, r, |x|), any angle.
#[derive(Debug, Clone)]
pub struct OuBallKernel {
    n: u32,
    lambda: f64,
    r: f64,
    x_norm: f64,
    contour: Option<ContourKernel>,
}

impl OuBallKernel {
    pub fn new(n: u32, lambda: f64, r: f64, x_norm: f64, spec: &ContourSpec) -> Result<Self> {
        OuBallQuery::new(n, lambda, r, x_norm, 0.0)?;
        let contour = if x_norm == 0.0 {
            None
        } else {
            let kappa = (r / x_norm).ln();
            Some(ContourKernel::new(n, spec, kappa, |w| {
                lmu_ou(n, lambda, r, x_norm, w)
            })?)
        };
        Ok(OuBallKernel {
            n,
            lambda,
            r,
            x_norm,
            contour,
        })
    }

    /// Kernel density with respect to surface measure on the sphere of radius r.
    pub fn eval(&self, phi: f64) -> Result<f64> {
        let nf = self.n as f64;
        let Some(contour) = &self.contour else {
            return Ok(gamma_real(nf / 2.0)? / (2.0 * PI.powf(nf / 2.0) * self.r.powf(nf - 1.0)));
        };
        let pref = gamma_real((nf - 1.0) / 2.0)?
            / (PI.powf((nf - 1.0) / 2.0) * self.r.powf(nf - 1.0))
            * (self.lambda * (self.r * self.r - self.x_norm * self.x_norm) / 2.0).exp();
        Ok(pref * contour.integral_smooth(phi)?)
    }
}

/// OU ball Poisson kernel.
pub fn poisson_kernel_ou_ball(
    q: &OuBallQuery,
    spec: &ContourSpec,
    variant: OuVariant,
) -> Result<f64> {
    q.validate()?;
    match variant {
        OuVariant::Derived => OuBallKernel::new(q.n, q.lambda, q.r, q.x_norm, spec)?.eval(q.phi),
        OuVariant::AsPrinted => poisson_kernel_ou_as_printed(q, spec),
    }
}

/// The printed closed form, evaluated literally by the trapezoid rule on
/// `c + iy`, `|y| <= H`, with `spec` overriding the printed line
/// (`c = -(n-2)^2/16`, `H = 200`, 4001 nodes) where given. Defined only for
/// `r < 1`.
pub fn poisson_kernel_ou_as_printed(q: &OuBallQuery, spec: &ContourSpec) -> Result<f64> {
    q.validate()?;
    if q.r >= 1.0 {
        return Err(Error::Domain(format!(
            "the printed prefactor ((1-|x|^2)/(1-r^2))^nu needs r < 1, got {}",
            q.r
        )));
    }
    if q.x_norm == 0.0 {
        return Err(Error::Domain("the printed form needs |x| > 0".into()));
    }
    let n = q.n;
    let nf = n as f64;
    let nu = nf / 2.0 - 1.0;
    let classic = ContourSpec::classic(n);
    let c = spec.c.or(classic.c).unwrap();
    let height = spec.height.or(classic.height).unwrap();
    let nodes = spec.nodes.or(classic.nodes).unwrap();
    let step = 2.0 * height / (nodes - 1) as f64;
    let phi = reduce_angle(q.phi)?.max(1e-9);
    let (z, wz) = half_angle(phi);
    let u = wz - z; // -cos phi
    let count = (height / step).round() as usize + 1;
    let k = -nf / 2.0;
    let b = (3.0 - nf) / 2.0;
    let terms: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|j| {
            let zz = Complex64::new(c, j as f64 * step);
            let mu = whittaker_mu(n, zz);
            let ratio = whittaker_m(k, mu, q.lambda * q.x_norm * q.x_norm)?
                / whittaker_m(k, mu, q.lambda * q.r * q.r)?;
            let a = coef_a(n, zz)?;
            let f = (ratio * coef_b(n, zz)? * legendre_p(a - 0.5, b, u)?).re;
            Ok(if j == 0 { 0.5 * f } else { f })
        })
        .collect::<Result<_>>()?;
    let integral = pairwise_sum(&terms) * step / PI;
    let pref = 2.0 * gamma_real((nf + 1.0) / 2.0)?
        / (PI.powf((nf - 1.0) / 2.0) * nf * q.r.powf(nf - 1.0))
        * ((1.0 - q.x_norm * q.x_norm) / (1.0 - q.r * q.r)).powf(nu)
        * (q.r / q.x_norm).powf(nf / 2.0)
        * phi.sin().powf(b);
    Ok(pref * integral)
}

/// Poisson kernel of the Euclidean ball for Brownian motion,
/// `(r^2 - |x|^2) / (omega r |x - y|^n)` with `omega = 2 pi^{n/2} / Gamma(n/2)`
/// the area of the unit sphere.
pub fn flat_ball_kernel(n: u32, r: f64, x_norm: f64, phi: f64) -> f64 {
    let nf = n as f64;
    let omega = 2.0 * PI.powf(nf / 2.0) / gamma_real(nf / 2.0).unwrap();
    let d2 = x_norm * x_norm + r * r - 2.0 * x_norm * r * phi.cos();
    (r * r - x_norm * x_norm) / (omega * r * d2.powf(nf / 2.0))
}
