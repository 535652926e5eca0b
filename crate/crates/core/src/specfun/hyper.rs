//! Gauss hypergeometric 2F1 (complex parameters, real argument) and Kummer's
//! confluent 1F1.
//!
//! 2F1 regions:
//! * terminating parameter: finite sum, any z;
//! * z < 0: Pfaff transformation onto (0, 1);
//! * 0 <= z <= [`Z_SERIES`]: Gauss series;
//! * Z_SERIES < z < 1: linear transformation to 1 - z, with the logarithmic
//!   forms when c - a - b is an integer; when that loses accuracy (large
//!   complex parameters) the Gauss series is tried as well and the result
//!   with the smaller error estimate is kept;
//! * z = 1: Gauss summation.

use super::{c, check_finite, digamma, is_pole, ln_gamma, nonpositive_int, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;

pub const Z_SERIES: f64 = 0.5;
const MAX_TERMS: usize = 200_000;
const EPS: f64 = 1e-17;
const INT_TOL: f64 = 1e-12;
/// Unit roundoff used in the error estimates.
const ROUND: f64 = 2.2e-16;
/// Largest z for which the Gauss series is tried as an alternative to the
/// 1 - z transformation.
const Z_SERIES_MAX: f64 = 0.99;

fn one() -> Complex64 {
    c(1.0, 0.0)
}

/// Gamma(z) through exp(ln Gamma), panicking only on poles the callers have
/// already excluded.
fn gam(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

fn terminating_degree(a: Complex64) -> Option<usize> {
    match nonpositive_int(a) {
        Some((k, d)) if d < INT_TOL => Some((-k) as usize),
        _ => None,
    }
}

/// A value with an absolute rounding-error estimate.
#[derive(Debug, Clone, Copy)]
struct Est {
    v: Complex64,
    err: f64,
}

impl Est {
    fn scale(self, s: Complex64) -> Est {
        Est {
            v: self.v * s,
            err: self.err * s.norm(),
        }
    }
    fn add(self, o: Est) -> Est {
        Est {
            v: self.v + o.v,
            err: self.err + o.err,
        }
    }
}

/// Gauss series; the error estimate is eps times the sum of |terms|.
fn series(a: Complex64, b: Complex64, cc: Complex64, z: f64, max_terms: usize) -> Result<Est> {
    let mut sum = one();
    let mut abs = 1.0;
    let mut term = one();
    let mut small = 0;
    for k in 0..max_terms {
        let fk = k as f64;
        term = term * (a + fk) * (b + fk) / ((cc + fk) * (fk + 1.0)) * z;
        sum += term;
        abs += term.norm();
        if term.norm() <= EPS * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(Est {
                    v: sum,
                    err: ROUND * abs,
                });
            }
        } else {
            small = 0;
        }
        if term.norm() == 0.0 {
            return Ok(Est {
                v: sum,
                err: ROUND * abs,
            });
        }
    }
    if max_terms < MAX_TERMS {
        return Ok(Est {
            v: sum,
            err: ROUND * abs,
        });
    }
    Err(Error::Divergence(format!(
        "2F1({a}, {b}; {cc}; {z}) series did not converge in {max_terms} terms"
    )))
}

/// Normalization of the value being computed.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Norm {
    /// 2F1 itself.
    Plain,
    /// Gamma(a) Gamma(b) / Gamma(c) 2F1.
    Gammas,
}

/// exp(sum of +-ln Gamma); zero if any denominator argument is a pole.
fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut l = c(0.0, 0.0);
    for &d in den {
        if is_pole(d) {
            return Ok(c(0.0, 0.0));
        }
        l -= ln_gamma(d)?;
    }
    for &n in num {
        l += ln_gamma(n)?;
    }
    Ok(l.exp())
}

/// 2F1(a, b; c; z) for real z <= 1.
///
/// Errors: `Pole` when c is a nonpositive integer (within 1e-12),
/// `Divergence` at z = 1 unless Re(c - a - b) > 0, `Domain` for z > 1.
pub fn hyp2f1(a: Complex64, b: Complex64, cc: Complex64, z: f64) -> Result<Complex64> {
    check_finite(a, "2F1 parameter a")?;
    check_finite(b, "2F1 parameter b")?;
    check_finite(cc, "2F1 parameter c")?;
    if !z.is_finite() || z > 1.0 {
        return Err(Error::Domain(format!("2F1 argument must be <= 1, got {z}")));
    }
    if is_pole(cc) {
        return Err(Error::Pole(format!(
            "2F1 lower parameter {cc} is a nonpositive integer"
        )));
    }
    if z == 0.0 {
        return Ok(one());
    }
    let deg = match (terminating_degree(a), terminating_degree(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        _ => None,
    };
    if let Some(m) = deg {
        return Ok(series(a, b, cc, z, m + 1)?.v);
    }
    if z == 1.0 {
        let s = cc - a - b;
        if s.re <= 0.0 {
            return Err(Error::Divergence(format!(
                "2F1 at z = 1 needs Re(c-a-b) > 0, got {s}"
            )));
        }
        return Ok(gam(cc)? * gam(s)? * rgamma(cc - a) * rgamma(cc - b));
    }
    if z < 0.0 {
        // Pfaff: (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        let zt = z / (z - 1.0);
        let (p, q) = if a.norm() <= b.norm() { (a, b) } else { (b, a) };
        let f = hyp2f1(p, cc - q, cc, zt)?;
        return Ok(f * (-p * (1.0 - z).ln()).exp());
    }
    Ok(unit_interval(a, b, cc, z, 1.0 - z, Norm::Plain, 0.0)?.v)
}

/// Gamma(a) Gamma(b) / Gamma(c) 2F1(a, b; c; z) for 0 <= z < 1, with an
/// absolute error estimate.
///
/// `w` must equal 1 - z; passing it separately keeps full relative accuracy
/// in 1 - z close to the singular point. Results whose error estimate is
/// below `abs_tol` are accepted without trying the alternative expansion. The normalized form stays finite
/// where 2F1 itself is huge and the Gamma prefactor tiny (large complex a,
/// b), so the product never overflows.
pub fn hyp2f1_gamma_scaled(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    z: f64,
    w: f64,
    abs_tol: f64,
) -> Result<(Complex64, f64)> {
    check_finite(a, "2F1 parameter a")?;
    check_finite(b, "2F1 parameter b")?;
    check_finite(cc, "2F1 parameter c")?;
    if !(0.0..=1.0).contains(&z) || !(w > 0.0) || (z + w - 1.0).abs() > 1e-15 {
        return Err(Error::Domain(format!(
            "scaled 2F1 needs 0 <= z < 1 and w = 1 - z, got {z}, {w}"
        )));
    }
    for p in [a, b, cc] {
        if is_pole(p) {
            return Err(Error::Pole(format!(
                "scaled 2F1 parameter {p} at a Gamma pole"
            )));
        }
    }
    let e = unit_interval(a, b, cc, z, w, Norm::Gammas, abs_tol)?;
    Ok((e.v, e.err))
}

/// 0 < z < 1: the Gauss series, the transformation to 1 - z, or both with
/// the smaller error estimate kept.
fn unit_interval(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    z: f64,
    w: f64,
    norm: Norm,
    abs_tol: f64,
) -> Result<Est> {
    let direct = |max_terms: usize| -> Result<Est> {
        let s = series(a, b, cc, z, max_terms)?;
        Ok(match norm {
            Norm::Plain => s,
            Norm::Gammas => s.scale(gamma_ratio(&[a, b], &[cc])?),
        })
    };
    if z <= Z_SERIES {
        return direct(MAX_TERMS);
    }
    let t = one_minus_z(a, b, cc, w, norm);
    let good = |e: &Est| e.err <= (1e-13 * e.v.norm()).max(abs_tol);
    match t {
        Ok(e) if good(&e) => Ok(e),
        Ok(e) if z <= Z_SERIES_MAX => match direct(MAX_TERMS) {
            Ok(s) if s.err < e.err => Ok(s),
            _ => Ok(e),
        },
        Ok(e) => Ok(e),
        Err(err) => {
            if z <= Z_SERIES_MAX {
                direct(MAX_TERMS)
            } else {
                Err(err)
            }
        }
    }
}

fn one_minus_z(a: Complex64, b: Complex64, cc: Complex64, w: f64, norm: Norm) -> Result<Est> {
    let s = cc - a - b;
    let m = s.re.round();
    if s.im.abs() < INT_TOL && (s.re - m).abs() < INT_TOL {
        return degenerate(a, b, cc, m as i64, w, norm);
    }
    let (t1, t2) = match norm {
        Norm::Plain => (
            gam(cc)? * gam(s)? * rgamma(cc - a) * rgamma(cc - b),
            gam(cc)? * gam(-s)? * rgamma(a) * rgamma(b),
        ),
        Norm::Gammas => (gamma_ratio(&[s, a, b], &[cc - a, cc - b])?, gam(-s)?),
    };
    let mut out = Est {
        v: c(0.0, 0.0),
        err: 0.0,
    };
    if t1.norm() != 0.0 {
        out = out.add(hyp2f1_est(a, b, 1.0 - s, w)?.scale(t1));
    }
    if t2.norm() != 0.0 {
        out = out.add(hyp2f1_est(cc - a, cc - b, s + 1.0, w)?.scale(t2 * (s * w.ln()).exp()));
    }
    Ok(out)
}

/// 2F1 with error estimate for 0 < w < 1 (used on the transformed side).
fn hyp2f1_est(a: Complex64, b: Complex64, cc: Complex64, w: f64) -> Result<Est> {
    if w <= Z_SERIES {
        let deg = terminating_degree(a).or(terminating_degree(b));
        return series(a, b, cc, w, deg.map_or(MAX_TERMS, |m| m + 1));
    }
    let v = hyp2f1(a, b, cc, w)?;
    Ok(Est {
        v,
        err: ROUND * v.norm(),
    })
}

/// c = a + b + m with integer m; logarithmic connection formulas.
fn degenerate(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
    m: i64,
    w: f64,
    norm: Norm,
) -> Result<Est> {
    let lnw = w.ln();
    let psi1 = |k: usize| -> Result<Complex64> { digamma(c(k as f64 + 1.0, 0.0)) };
    let gc = if norm == Norm::Plain { gam(cc)? } else { one() };
    // Gamma(c) / (Gamma(p) Gamma(q)) in the requested normalization
    let ratio = |p: Complex64, q: Complex64| -> Result<Complex64> {
        match norm {
            Norm::Plain => Ok(gc * rgamma(p) * rgamma(q)),
            Norm::Gammas => gamma_ratio(&[a, b], &[p, q]),
        }
    };
    let mu = m.unsigned_abs() as usize;
    let mf = mu as f64;
    // shifted parameters entering the logarithmic series
    let (ap, bp) = if m >= 0 { (a + mf, b + mf) } else { (a, b) };
    let mut out = Est {
        v: c(0.0, 0.0),
        err: 0.0,
    };
    if mu > 0 {
        let (pref, sa, sb) = if m >= 0 {
            (ratio(a + mf, b + mf)? * factorial(mu - 1), a, b)
        } else {
            (
                ratio(a, b)? * factorial(mu - 1) * w.powi(-(mu as i32)),
                a - mf,
                b - mf,
            )
        };
        let mut fin = c(0.0, 0.0);
        let mut abs = 0.0;
        let mut t = one();
        for n in 0..mu {
            fin += t;
            abs += t.norm();
            let fnn = n as f64;
            t = t * (sa + fnn) * (sb + fnn) / ((fnn + 1.0) * (1.0 - mf + fnn)) * w;
        }
        out = out.add(
            Est {
                v: fin,
                err: ROUND * abs,
            }
            .scale(pref),
        );
    }
    let sign = if mu.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pref = if m >= 0 {
        ratio(a, b)? * sign * w.powi(mu as i32)
    } else {
        ratio(a - mf, b - mf)? * sign
    };
    if pref.norm() == 0.0 {
        return Ok(out);
    }
    let mut coef = one() / factorial(mu);
    let mut sum = c(0.0, 0.0);
    let mut abs = 0.0;
    let mut pn = psi1(0)?;
    let mut pnm = psi1(mu)?;
    let mut pa = digamma(ap)?;
    let mut pb = digamma(bp)?;
    let mut converged = false;
    for n in 0..MAX_TERMS {
        let fnn = n as f64;
        if n > 0 {
            pn += 1.0 / fnn;
            pnm += 1.0 / (fnn + mf);
            pa += (ap + fnn - 1.0).inv();
            pb += (bp + fnn - 1.0).inv();
        }
        let bracket = lnw - pn - pnm + pa + pb;
        let term = coef * bracket;
        sum += term;
        abs += term.norm();
        coef = coef * (ap + fnn) * (bp + fnn) / ((fnn + 1.0) * (fnn + 1.0 + mf)) * w;
        if term.norm() <= EPS * sum.norm() && coef.norm() * (1.0 + lnw.abs()) <= EPS * sum.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Divergence(format!(
            "2F1({a}, {b}; {cc}; 1 - {w}) logarithmic series did not converge"
        )));
    }
    // F = fin - (z-1)^m Gamma(c)/(Gamma(a)Gamma(b)) sum, (z-1)^m = (-1)^m w^m
    Ok(out.add(
        Est {
            v: -sum,
            err: ROUND * abs,
        }
        .scale(pref),
    ))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Kummer's M(a, b, x) = 1F1(a; b; x) for real x.
///
/// Direct series for x >= 0; Kummer's transformation
/// M(a, b, x) = e^x M(b - a, b, -x) for x < 0.
pub fn hyp1f1(a: Complex64, b: Complex64, x: f64) -> Result<Complex64> {
    check_finite(a, "1F1 parameter a")?;
    check_finite(b, "1F1 parameter b")?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("1F1 argument not finite: {x}")));
    }
    if is_pole(b) {
        return Err(Error::Pole(format!(
            "1F1 lower parameter {b} is a nonpositive integer"
        )));
    }
    if let Some(m) = terminating_degree(a) {
        return series_1f1(a, b, x, m + 1);
    }
    if x < 0.0 {
        return Ok(hyp1f1(b - a, b, -x)? * x.exp());
    }
    series_1f1(a, b, x, MAX_TERMS)
}

fn series_1f1(a: Complex64, b: Complex64, x: f64, max_terms: usize) -> Result<Complex64> {
    let mut sum = one();
    let mut term = one();
    let mut small = 0;
    for k in 0..max_terms {
        let fk = k as f64;
        term = term * (a + fk) / ((b + fk) * (fk + 1.0)) * x;
        sum += term;
        if term.norm() <= EPS * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    if max_terms < MAX_TERMS {
        return Ok(sum);
    }
    Err(Error::Divergence(format!(
        "1F1({a}; {b}; {x}) series did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sum() {
        let v = hyp2f1(one(), one(), c(3.0, 0.0), 1.0).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn divergence_at_one() {
        let r = hyp2f1(one(), one(), c(2.0, 0.0), 1.0);
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn elementary_log() {
        // 2F1(1, 1; 2; z) = -ln(1-z)/z
        for &z in &[0.2, 0.6, 0.95, -2.0] {
            let v = hyp2f1(one(), one(), c(2.0, 0.0), z).unwrap();
            let want = -(1.0 - z).ln() / z;
            assert!((v.re - want).abs() < 1e-14 * want.abs(), "z={z}: {v}");
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn kummer_exp() {
        let v = hyp1f1(c(2.5, 1.0), c(2.5, 1.0), 3.0).unwrap();
        assert!((v - c(3.0f64.exp(), 0.0)).norm() < 1e-13 * 3.0f64.exp());
        let v = hyp1f1(c(2.5, 1.0), c(2.5, 1.0), -3.0).unwrap();
        assert!((v - c((-3.0f64).exp(), 0.0)).norm() < 1e-15);
    }
}
