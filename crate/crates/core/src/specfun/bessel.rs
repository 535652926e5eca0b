//! Bessel functions J_nu, Y_nu (real argument, real order nu >= 0) and the
//! modified Bessel function K_nu (complex argument).
//!
//! J/Y: Temme's series for x < 2, Steed's continued fractions for
//! 2 <= x < [`X_HANKEL`], Hankel's asymptotic expansion beyond. K: Temme's
//! series for |z| <= 2, Steed's continued fraction up to |z| = 25 + nu^2,
//! asymptotic expansion beyond.

use super::gamma::RGAMMA_TAYLOR;
use super::{c, check_finite};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const X_SERIES: f64 = 2.0;

/// Crossover to Hankel's expansion is `X_HANKEL + nu^2`.
pub const X_HANKEL: f64 = 25.0;

/// Temme's auxiliary quantities for |mu| <= 1/2:
/// (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Gamma(1+x) = sum_{k>=1} c_k x^{k-1}
    let x2 = mu * mu;
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut p = 1.0;
    for k in (0..RGAMMA_TAYLOR.len()).step_by(2) {
        even += RGAMMA_TAYLOR[k] * p;
        if k + 1 < RGAMMA_TAYLOR.len() {
            odd += RGAMMA_TAYLOR[k + 1] * p;
        }
        p *= x2;
    }
    // rg(x) = even + x odd, rg(-x) = even - x odd
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

/// J_nu, Y_nu and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselJY {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

fn check_order(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel order must be >= 0, got {nu}"
        )));
    }
    Ok(())
}

/// J_nu(x), Y_nu(x), J'_nu(x), Y'_nu(x) for x > 0, nu >= 0.
pub fn bessel_jy(nu: f64, x: f64) -> Result<BesselJY> {
    check_order(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel J/Y need x > 0, got {x}")));
    }
    if x >= X_HANKEL + nu * nu {
        return Ok(hankel_jy(nu, x));
    }
    Ok(steed_temme_jy(nu, x))
}

/// J_nu(x) for x > 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_jy(nu, x)?.j)
}

/// Y_nu(x) for x > 0.
pub fn bessel_y(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_jy(nu, x)?.y)
}

fn steed_temme_jy(xnu: f64, x: f64) -> BesselJY {
    let nl = if x < X_SERIES {
        (xnu + 0.5) as i64
    } else {
        ((xnu - x + 1.5) as i64).max(0)
    };
    let xmu = xnu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu
    let mut isign = 1.0;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut cc = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        cc = b - 1.0 / cc;
        if cc.abs() < FPMIN {
            cc = FPMIN;
        }
        d = 1.0 / d;
        let del = cc * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }

    // downward recurrence to order xmu
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, mut ry1);
    if x < X_SERIES {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = FRAC_2_PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2: p + i q = (J' + i Y') / (J + i Y)
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() <= EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mut jm = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            jm = -jm;
        }
        rjmu = jm;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    let fact = rjmu / rjl;
    let j = rjl1 * fact;
    let jp = rjp1 * fact;
    let mut rymu = rymu;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    BesselJY {
        j,
        y: rymu,
        jp,
        yp: xnu * xi * rymu - ry1,
    }
}

/// Hankel's P and Q for order nu at argument x (x large).
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let m4 = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (m4 - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * p.abs() {
            break;
        }
    }
    (p, q)
}

/// Modulus and phase for x >= X_HANKEL + nu^2:
/// J_nu(x) + i Y_nu(x) = M exp(i theta).
///
/// The phase is returned as `(x, offset)` with theta = x + offset so callers
/// can form phase differences without cancellation.
pub fn hankel_modulus_phase(nu: f64, x: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(nu, x);
    let m = (FRAC_2_PI / x).sqrt() * p.hypot(q);
    let offset = -(0.5 * nu + 0.25) * PI + q.atan2(p);
    (m, offset)
}

fn hankel_jy(nu: f64, x: f64) -> BesselJY {
    let s = (FRAC_2_PI / x).sqrt();
    let chi = x - (0.5 * nu + 0.25) * PI;
    let (sc, cc) = chi.sin_cos();
    let (p, q) = hankel_pq(nu, x);
    let j = s * (p * cc - q * sc);
    let y = s * (p * sc + q * cc);
    let chi1 = chi - 0.5 * PI;
    let (s1, c1) = chi1.sin_cos();
    let (p1, q1) = hankel_pq(nu + 1.0, x);
    let j1 = s * (p1 * c1 - q1 * s1);
    let y1 = s * (p1 * s1 + q1 * c1);
    BesselJY {
        j,
        y,
        jp: nu / x * j - j1,
        yp: nu / x * y - y1,
    }
}

/// K_nu(z) for complex z off the closed negative real axis.
pub fn bessel_k(nu: f64, z: Complex64) -> Result<Complex64> {
    Ok(bessel_k_scaled(nu, z)? * (-z).exp())
}

/// K_nu(x) for real x > 0.
pub fn bessel_k_real(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("K_nu needs x > 0, got {x}")));
    }
    Ok(bessel_k(nu, c(x, 0.0))?.re)
}

/// exp(z) K_nu(z).
pub fn bessel_k_scaled(nu: f64, z: Complex64) -> Result<Complex64> {
    check_order(nu)?;
    check_finite(z, "K_nu argument")?;
    if z.norm() == 0.0 {
        return Err(Error::Domain("K_nu is singular at z = 0".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut(format!(
            "K_nu argument {z} on the negative axis"
        )));
    }
    let r = z.norm();
    if r >= X_HANKEL + nu * nu {
        return Ok(k_asymptotic(nu, z));
    }
    let nl = (nu + 0.5) as i64;
    let xmu = nu - nl as f64;
    let (mut kmu, mut k1) = if r <= X_SERIES {
        k_temme_series(xmu, z)
    } else {
        k_steed(xmu, z)
    };
    let zi2 = z.inv() * 2.0;
    for i in 1..=nl {
        let kt = zi2 * (xmu + i as f64) * k1 + kmu;
        kmu = k1;
        k1 = kt;
    }
    Ok(kmu)
}

/// Scaled (K_mu, K_{mu+1}) for |mu| <= 1/2, |z| <= 2.
fn k_temme_series(xmu: f64, z: Complex64) -> (Complex64, Complex64) {
    let xmu2 = xmu * xmu;
    let x2 = z * 0.5;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < EPS {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = d * xmu;
    let fact2 = if e.norm() < EPS {
        c(1.0, 0.0)
    } else {
        e.sinh() / e
    };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = (e.cosh() * gam1 + fact2 * d * gam2) * fact;
    let mut sum = ff;
    let ee = e.exp();
    let mut p = ee * (0.5 / gampl);
    let mut q = ee.inv() * (0.5 / gammi);
    let mut cc = c(1.0, 0.0);
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAXIT {
        let fi = i as f64;
        ff = (ff * fi + p + q) / (fi * fi - xmu2);
        cc = cc * dd / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = cc * ff;
        sum += del;
        let del1 = cc * (p - ff * fi);
        sum1 += del1;
        if del.norm() < sum.norm() * EPS {
            break;
        }
    }
    let scale = z.exp();
    (sum * scale, sum1 * x2.inv() * scale)
}

/// Scaled (K_mu, K_{mu+1}) for |mu| <= 1/2 via Steed's CF2 (Temme's form).
fn k_steed(xmu: f64, z: Complex64) -> (Complex64, Complex64) {
    let xmu2 = xmu * xmu;
    let mut b = (z + 1.0) * 2.0;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = c(0.0, 0.0);
    let mut q2 = c(1.0, 0.0);
    let a1 = 0.25 - xmu2;
    let mut q = c(a1, 0.0);
    let mut cc = c(a1, 0.0);
    let mut a = -a1;
    let mut s = q * delh + 1.0;
    for i in 1..MAXIT {
        let fi = i as f64;
        a -= 2.0 * fi;
        cc = -cc * a / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += cc * qnew;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < EPS {
            break;
        }
    }
    let h = h * a1;
    let kmu = (c(PI, 0.0) / (z * 2.0)).sqrt() / s;
    let k1 = kmu * (z + xmu + 0.5 - h) / z;
    (kmu, k1)
}

fn k_asymptotic(nu: f64, z: Complex64) -> Complex64 {
    let m4 = 4.0 * nu * nu;
    let zi = z.inv();
    let mut sum = c(1.0, 0.0);
    let mut term = c(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term = term * zi * ((m4 - odd * odd) / (k as f64 * 8.0));
        let t = term.norm();
        if t > prev {
            break;
        }
        prev = t;
        sum += term;
        if t < 1e-17 * sum.norm() {
            break;
        }
    }
    (c(PI, 0.0) / (z * 2.0)).sqrt() * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_closed_forms() {
        let x = PI / 2.0;
        let b = bessel_jy(0.5, x).unwrap();
        assert!((b.j - 2.0 / PI).abs() < 1e-15);
        assert!(b.y.abs() < 1e-15);
        let k = bessel_k(0.5, c(1.0, 0.0)).unwrap();
        assert!((k.re - (PI / 2.0).sqrt() * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn temme_gamma_helpers() {
        let (g1, g2, gp, gm) = temme_gammas(0.3);
        let rg = |x: f64| 1.0 / super::super::gamma_real(1.0 + x).unwrap();
        assert!((gp - rg(0.3)).abs() < 1e-15);
        assert!((gm - rg(-0.3)).abs() < 1e-15);
        assert!((g2 - 0.5 * (rg(-0.3) + rg(0.3))).abs() < 1e-15);
        assert!((g1 - (rg(-0.3) - rg(0.3)) / 0.6).abs() < 1e-14);
    }
}
