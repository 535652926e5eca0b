//! Poisson kernel of a centered ball for hyperbolic Brownian motion in the
//! Poincare ball model.
//!
//! The exit point is the angular process run up to the radial clock; the
//! kernel is an inverse Laplace transform of the clock transform against
//! the lambda-Green function of the angular process `S` (the cosine of the
//! angle to the target direction), evaluated with [`ContourKernel`].

use crate::contour::{reduce_angle, speed_mass, ContourKernel, ContourSpec};
use crate::error::{Error, Result};
use crate::specfun::{gamma, gamma_real, hyp2f1, hyp2f1_gamma_scaled, legendre_p};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Point of evaluation: dimension, ball radius, |x| and angle between x and y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallQuery {
    pub n: u32,
    pub r: f64,
    pub x_norm: f64,
    pub phi: f64,
}

impl BallQuery {
    pub fn new(n: u32, r: f64, x_norm: f64, phi: f64) -> Result<Self> {
        let q = BallQuery { n, r, x_norm, phi };
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
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::Domain(format!(
                "radius must lie in (0, 1), got {}",
                self.r
            )));
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

    /// `nu = n/2 - 1`.
    pub fn nu(&self) -> f64 {
        self.n as f64 / 2.0 - 1.0
    }
}

/// Surface measure of the sphere of radius r in R^n.
pub fn sphere_area(n: u32, r: f64) -> f64 {
    let n = n as f64;
    2.0 * PI.powf(n / 2.0) / gamma_real(n / 2.0).unwrap() * r.powf(n - 1.0)
}

/// `A(z) = sqrt((n-2)^2 - 8 z) / 2`, principal branch.
pub fn coef_a(n: u32, z: Complex64) -> Result<Complex64> {
    let s = Complex64::new(((n as f64) - 2.0).powi(2), 0.0) - z * 8.0;
    if s.im == 0.0 && s.re < 0.0 {
        return Err(Error::BranchCut(format!(
            "A({z}) on the branch cut of the square root"
        )));
    }
    Ok(s.sqrt() * 0.5)
}

/// `B_n(z) = Gamma(nu - A) Gamma(nu + A) / (2^{(n+1)/2} z Gamma((n-1)/2))`.
pub fn coef_b(n: u32, z: Complex64) -> Result<Complex64> {
    if z.norm() < crate::specfun::POLE_TOL {
        return Err(Error::Pole("B_n has a pole at z = 0".into()));
    }
    Ok(green_coef(n, z)? / (z * 2.0))
}

/// Normalizing constant of the Green function:
/// `Gamma(nu - A) Gamma(nu + A) / (2^{(n-1)/2} Gamma((n-1)/2))`.
pub fn green_coef(n: u32, lambda: Complex64) -> Result<Complex64> {
    let nu = n as f64 / 2.0 - 1.0;
    let a = coef_a(n, lambda)?;
    let nf = n as f64;
    let g = gamma(nu - a)? * gamma(nu + a)?;
    Ok(g / (2f64.powf((nf - 1.0) / 2.0) * gamma_real((nf - 1.0) / 2.0)?))
}

/// lambda-Green function `G_lambda(x, 1)` of the angular process, Legendre
/// form `B(lambda) (1 - x^2)^{(3-n)/4} P_{A - 1/2}^{(3-n)/2}(-x)`.
pub fn green_function_s(n: u32, lambda: Complex64, x: f64) -> Result<Complex64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "Green function needs x in (-1, 1), got {x}"
        )));
    }
    let nf = n as f64;
    let a = coef_a(n, lambda)?;
    let b = green_coef(n, lambda)?;
    let p = legendre_p(a - 0.5, (3.0 - nf) / 2.0, -x)?;
    Ok(b * (1.0 - x * x).powf((3.0 - nf) / 4.0) * p)
}

/// The same Green function through the hypergeometric form
/// `Gamma(nu-A) Gamma(nu+A) / (2^{n-2} Gamma((n-1)/2)^2) 2F1(nu-A, nu+A; (n-1)/2; (1+x)/2)`.
pub fn green_function_s_hyp(n: u32, lambda: Complex64, x: f64) -> Result<Complex64> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(format!(
            "Green function needs x in (-1, 1), got {x}"
        )));
    }
    let nu = n as f64 / 2.0 - 1.0;
    Ok(green_scaled(n, nu, -lambda, (1.0 + x) / 2.0, (1.0 - x) / 2.0, 0.0)?.0)
}

/// `G(-w; u)` with `z = (1+u)/2`, `wz = 1 - z` supplied separately, and its
/// error estimate; errors below `abs_tol` are accepted.
pub(crate) fn green_scaled(
    n: u32,
    nu: f64,
    w: Complex64,
    z: f64,
    wz: f64,
    abs_tol: f64,
) -> Result<(Complex64, f64)> {
    let nf = n as f64;
    let a = coef_a(n, -w)?;
    let cc = Complex64::new((nf - 1.0) / 2.0, 0.0);
    let (v, err) = hyp2f1_gamma_scaled(nu - a, nu + a, cc, z, wz, abs_tol)?;
    let scale = 2f64.powf(nf - 2.0) * gamma_real((nf - 1.0) / 2.0)?;
    Ok((v / scale, err / scale))
}

/// Laplace transform of the clock measure started at |x|:
/// `(r/|x|)^nu P_nu^{-A(-w)}(X(|x|)) / P_nu^{-A(-w)}(X(r))`, `X(y) = (1+y^2)/(1-y^2)`,
/// for `Re w > -nu^2/2`.
pub fn laplace_mu_ball(q: &BallQuery, w: Complex64) -> Result<Complex64> {
    q.validate()?;
    let nu = q.nu();
    if !(w.re > -nu * nu / 2.0) || !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Domain(format!(
            "Laplace transform needs Re w > {}, got {w}",
            -nu * nu / 2.0
        )));
    }
    if q.x_norm == 0.0 {
        return Err(Error::Domain("clock transform needs |x| > 0".into()));
    }
    lmu_hyperbolic(q.n, q.r, q.x_norm, w)
}

/// By Pfaff's transformation the Legendre ratio equals
/// `(r/y)^nu (y/r)^A ((1-r^2)/(1-y^2))^nu F(y^2)/F(r^2)` with
/// `F(s) = 2F1(-nu, A - nu; 1 + A; s)`.
pub(crate) fn lmu_hyperbolic(n: u32, r: f64, y: f64, w: Complex64) -> Result<Complex64> {
    let nu = n as f64 / 2.0 - 1.0;
    let a = coef_a(n, -w)?;
    let f = |s: f64| hyp2f1(Complex64::new(-nu, 0.0), a - nu, a + 1.0, s);
    let ratio = f(y * y)? / f(r * r)?;
    let pow = (a * (y / r).ln()).exp();
    Ok(ratio * pow * (r / y).powf(nu) * ((1.0 - r * r) / (1.0 - y * y)).powf(nu))
}

/// Poisson kernel evaluator for fixed (n, r, |x|) and any angle.
#[derive(Debug, Clone)]
pub struct BallKernel {
    n: u32,
    r: f64,
    x_norm: f64,
    contour: Option<ContourKernel>,
}

impl BallKernel {
    pub fn new(n: u32, r: f64, x_norm: f64, spec: &ContourSpec) -> Result<Self> {
        BallQuery::new(n, r, x_norm, 0.0)?;
        let contour = if x_norm == 0.0 {
            None
        } else {
            let kappa = (r / x_norm).ln();
            Some(ContourKernel::new(n, spec, kappa, |w| {
                lmu_hyperbolic(n, r, x_norm, w)
            })?)
        };
        Ok(BallKernel {
            n,
            r,
            x_norm,
            contour,
        })
    }

    /// Kernel density with respect to surface measure on the sphere of radius r.
    pub fn eval(&self, phi: f64) -> Result<f64> {
        let Some(contour) = &self.contour else {
            return Ok(1.0 / sphere_area(self.n, self.r));
        };
        let nf = self.n as f64;
        let nu = nf / 2.0 - 1.0;
        let pref = gamma_real((nf - 1.0) / 2.0)?
            / (PI.powf((nf - 1.0) / 2.0) * self.r.powf(nf - 1.0))
            * ((1.0 - self.x_norm * self.x_norm) / (1.0 - self.r * self.r)).powf(nu);
        Ok(pref * contour.integral_smooth(phi)?)
    }

    pub fn contour(&self) -> Option<&ContourKernel> {
        self.contour.as_ref()
    }
}

/// Poisson kernel `P_r(x, y)` of the ball of radius r.
pub fn poisson_kernel_ball(q: &BallQuery, spec: &ContourSpec) -> Result<f64> {
    q.validate()?;
    BallKernel::new(q.n, q.r, q.x_norm, spec)?.eval(q.phi)
}

/// Total mass `int P dsigma` by Gauss-Legendre quadrature in phi.
pub fn kernel_mass<F: Fn(f64) -> Result<f64>>(
    n: u32,
    r: f64,
    kernel: F,
    nodes: usize,
) -> Result<f64> {
    let (xs, ws) = crate::quad::gauss_legendre_on(nodes, 0.0, PI);
    let nf = n as f64;
    let omega = 2.0 * PI.powf((nf - 1.0) / 2.0) / gamma_real((nf - 1.0) / 2.0)?;
    let mut s = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        s += w * kernel(*x)? * x.sin().powf(nf - 2.0);
    }
    Ok(omega * r.powf(nf - 1.0) * s)
}

/// `1 / sigma(S_r)` expressed through the contour constants; equals the
/// density of the uniform measure.
pub fn uniform_density(n: u32, r: f64) -> f64 {
    let nf = n as f64;
    gamma_real((nf - 1.0) / 2.0).unwrap()
        / (PI.powf((nf - 1.0) / 2.0) * r.powf(nf - 1.0))
        / speed_mass(n)
}
