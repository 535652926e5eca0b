//! The Bessel cross ratio and its normalized form g_nu.
//!
//! R(x, t) = [J(t) Y(tx) - J(tx) Y(t)] / [J(t)^2 + Y(t)^2],
//! g_nu(x, t) = R(x, t) / ((x - 1) t^{2 nu}),
//! extended continuously to x = 1 and t = 0.

use super::{bessel_jy, gamma_real, hankel_modulus_phase, Order, X_HANKEL};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Below this t the t = 0 limit of g_nu is used.
const T_LIMIT: f64 = 1e-10;
/// Taylor expansion in x - 1 is used when x - 1 <= DELTA_TAYLOR and
/// (x - 1) max(t, 1) <= 1.
const DELTA_TAYLOR: f64 = 0.25;

/// A point (x, t) of [1, inf) x [0, inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnuPoint {
    pub x: f64,
    pub t: f64,
}

impl GnuPoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(x >= 1.0) || !x.is_finite() || !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!(
                "g_nu point ({x}, {t}) outside [1,inf)x[0,inf)"
            )));
        }
        Ok(GnuPoint { x, t })
    }
}

/// J^2 + Y^2 at t.
fn modulus_sq(nu: f64, t: f64) -> Result<f64> {
    if t >= X_HANKEL + nu * nu {
        let (m, _) = hankel_modulus_phase(nu, t);
        return Ok(m * m);
    }
    let b = bessel_jy(nu, t)?;
    Ok(b.j * b.j + b.y * b.y)
}

/// [J(t) Y(t(1+d)) - J(t(1+d)) Y(t)] / d as a power series in d.
fn cross_taylor(nu: f64, t: f64, d: f64) -> f64 {
    let t2 = t * t;
    let nu2 = nu * nu;
    // coefficients of the bracket, d_0 = 0, d_1 = 2/pi
    let mut c = [0.0f64, 2.0 / PI, 0.0, 0.0];
    let mut sum = c[1];
    let mut p = 1.0;
    let mut small = 0;
    for k in 0..2000usize {
        let kf = k as f64;
        let dm1 = if k >= 1 { c[(k - 1) % 4] } else { 0.0 };
        let dm2 = if k >= 2 { c[(k - 2) % 4] } else { 0.0 };
        let next = -((kf + 1.0) * (2.0 * kf + 1.0) * c[(k + 1) % 4]
            + (kf * kf + t2 - nu2) * c[k % 4]
            + 2.0 * t2 * dm1
            + t2 * dm2)
            / ((kf + 2.0) * (kf + 1.0));
        // slot (k+2)%4 held d_{k-2}, no longer needed
        c[(k + 2) % 4] = next;
        p *= d;
        let term = next * p;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

/// R(x, t) / (x - 1), finite at x = 1. Requires t > 0.
fn cross_over_delta(nu: f64, x: f64, t: f64) -> Result<f64> {
    let d = x - 1.0;
    if d <= DELTA_TAYLOR && d * t.max(1.0) <= 1.0 {
        return Ok(cross_taylor(nu, t, d) / modulus_sq(nu, t)?);
    }
    if t >= X_HANKEL + nu * nu {
        let (m1, o1) = hankel_modulus_phase(nu, t);
        let (m2, o2) = hankel_modulus_phase(nu, t * x);
        return Ok(m2 / m1 * (t * d + (o2 - o1)).sin() / d);
    }
    let a = bessel_jy(nu, t)?;
    let b = bessel_jy(nu, t * x)?;
    Ok((a.j * b.y - b.j * a.y) / (a.j * a.j + a.y * a.y) / d)
}

/// The cross ratio R(x, t) for x >= 1, t >= 0 (zero at t = 0 and at x = 1).
pub fn bessel_cross(nu: Order, x: f64, t: f64) -> Result<f64> {
    let p = GnuPoint::new(x, t)?;
    if p.t == 0.0 || p.x == 1.0 {
        return Ok(0.0);
    }
    Ok((x - 1.0) * cross_over_delta(nu.value(), x, t)?)
}

/// lim g_nu(x, t) as t -> 0.
pub fn g_nu_limit_t0(nu: Order, x0: f64) -> f64 {
    let nu = nu.value();
    // (x^{2 nu} - 1)/(x - 1), with its value 2 nu at x = 1
    let ratio = if (x0 - 1.0).abs() < 1e-8 {
        2.0 * nu * (1.0 + (nu - 0.5) * (x0 - 1.0))
    } else {
        (2.0 * nu * x0.ln()).exp_m1() / (x0 - 1.0)
    };
    let g = gamma_real(nu).unwrap_or(f64::NAN) * gamma_real(nu + 1.0).unwrap_or(f64::NAN);
    PI * x0.powf(-nu) * ratio / (4f64.powf(nu) * g)
}

/// lim g_nu(x, t) as x -> 1, for t0 > 0.
pub fn g_nu_limit_x1(nu: Order, t0: f64) -> Result<f64> {
    let nu = nu.value();
    Ok(2.0 / (PI * t0.powf(2.0 * nu) * modulus_sq(nu, t0)?))
}

/// g_nu(x, t) on [1, inf) x [0, inf), nu > 1/2.
pub fn g_nu(nu: Order, p: GnuPoint) -> Result<f64> {
    if !(nu.value() > 0.5) {
        return Err(Error::Domain(format!(
            "g_nu needs nu > 1/2, got {}",
            nu.value()
        )));
    }
    if p.t < T_LIMIT {
        return Ok(g_nu_limit_t0(nu, p.x));
    }
    let v = nu.value();
    Ok(cross_over_delta(v, p.x, p.t)? / p.t.powf(2.0 * v))
}
