//! Identity checks of the special-function layer against closed forms and
//! differential equations.

use crate::output::{Cell, Table};
use harmeas_core::specfun::{
    bessel_j, bessel_jy, bessel_y, g_nu, gamma_real, hyp2f1, legendre_p, whittaker_m, GnuPoint,
    Order,
};
use harmeas_core::{Complex64, Result};
use std::f64::consts::PI;

/// One identity evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub value: f64,
    pub target: f64,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    fn relative(suite: &'static str, case: String, value: f64, target: f64, tol: f64) -> Self {
        let error = ((value - target) / target).abs();
        Check {
            suite,
            case,
            value,
            target,
            error,
            tol,
        }
    }

    fn complex(
        suite: &'static str,
        case: String,
        value: Complex64,
        target: Complex64,
        tol: f64,
    ) -> Self {
        let error = (value - target).norm() / target.norm();
        Check {
            suite,
            case,
            value: value.re,
            target: target.re,
            error,
            tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }
}

/// Table with one row per check.
pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["suite", "case", "value", "target", "error", "tol", "pass"]);
    for c in checks {
        t.push(vec![
            Cell::from(c.suite),
            Cell::from(c.case.clone()),
            c.value.into(),
            c.target.into(),
            c.error.into(),
            c.tol.into(),
            c.passed().into(),
        ]);
    }
    t
}

/// `J Y' - J' Y = 2/(pi x)` for four orders on 50 log-spaced points in [0.1, 50].
pub fn wronskian() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for nu in [0.5, 1.0, 1.5, 2.5] {
        for k in 0..50 {
            let x = 0.1 * 500f64.powf(k as f64 / 49.0);
            let b = bessel_jy(nu, x)?;
            let w = b.j * b.yp - b.jp * b.y;
            out.push(Check::relative(
                "wronskian",
                format!("nu={nu} x={x:.6}"),
                w,
                2.0 / (PI * x),
                1e-10,
            ));
        }
    }
    Ok(out)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gauss's value at z = 1 and Euler's transformation on [0, 0.9].
pub fn hypergeometric() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let g = |x: f64| gamma_real(x);
    out.push(Check::relative(
        "2f1-gauss",
        "(1,1;3;1)".into(),
        hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0), 1.0)?.re,
        2.0,
        1e-10,
    ));
    let (a, b, cc) = (0.3, 0.4, 2.5);
    let target = g(cc)? * g(cc - a - b)? / (g(cc - a)? * g(cc - b)?);
    out.push(Check::relative(
        "2f1-gauss",
        "(0.3,0.4;2.5;1)".into(),
        hyp2f1(c(a, 0.0), c(b, 0.0), c(cc, 0.0), 1.0)?.re,
        target,
        1e-10,
    ));
    let params = [
        (c(0.3, 0.0), c(0.7, 0.0), c(1.9, 0.0)),
        (c(-0.4, 0.0), c(1.6, 0.0), c(1.0, 0.0)),
        (c(0.5, 2.0), c(0.5, -2.0), c(1.5, 0.0)),
        (c(1.5, 0.0), c(2.5, 0.0), c(3.2, 0.0)),
    ];
    for (a, b, cc) in params {
        for k in 0..10 {
            let z = 0.1 * k as f64;
            let lhs = hyp2f1(a, b, cc, z)?;
            let rhs = hyp2f1(cc - a, cc - b, cc, z)? * ((cc - a - b) * (1.0 - z).ln()).exp();
            out.push(Check::complex(
                "2f1-euler",
                format!("a={a} b={b} c={cc} z={z:.1}"),
                lhs,
                rhs,
                1e-10,
            ));
        }
    }
    Ok(out)
}

/// Central differences on nine points, orders 1 and 2.
const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    0.2,
    -0.8,
    0.0,
    0.8,
    -0.2,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const D2: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -0.2,
    1.6,
    -205.0 / 72.0,
    1.6,
    -0.2,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// `(f, f', f'')` at `x` from samples at `x + k h`, `k = -4..=4`.
fn derivatives<F: Fn(f64) -> Result<Complex64>>(f: F, x: f64, h: f64) -> Result<[Complex64; 3]> {
    let mut d = [c(0.0, 0.0); 3];
    for k in 0..9 {
        let v = f(x + (k as f64 - 4.0) * h)?;
        if k == 4 {
            d[0] = v;
        }
        d[1] += v * (D1[k] / h);
        d[2] += v * (D2[k] / (h * h));
    }
    Ok(d)
}

/// Residual of the Legendre and Whittaker equations, relative to the
/// largest term.
pub fn ode_residuals() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let h = 0.01;
    let degrees = [c(0.5, 0.0), c(1.3, 0.0), c(0.7, 2.5), c(-0.5, 1.8)];
    for a in degrees {
        for b in [0.0, -0.5, -1.0] {
            for x in [-0.6, -0.2, 0.3, 0.7, 1.5] {
                let [f, fp, fpp] = derivatives(|t| legendre_p(a, b, t), x, h)?;
                let terms = [
                    f * (a * (a + 1.0) - b * b / (1.0 - x * x)),
                    fp * (-2.0 * x),
                    fpp * (1.0 - x * x),
                ];
                out.push(residual(
                    "legendre-ode",
                    format!("a={a} b={b} x={x}"),
                    &terms,
                ));
            }
        }
    }
    let cases = [
        (-0.75, c(0.25, 0.0)),
        (-1.5, c(0.25, 0.0)),
        (-0.75, c(0.5, 2.0)),
        (-1.25, c(0.0, 1.2)),
    ];
    for (k, m) in cases {
        for x in [0.3, 0.7, 1.0, 3.0] {
            let [f, _, fpp] = derivatives(|t| whittaker_m(k, m, t), x, 0.01 * x)?;
            let q = c(0.25, 0.0) - m * m;
            let terms = [fpp, f * (-0.25 + k / x), f * q / (x * x)];
            out.push(residual(
                "whittaker-ode",
                format!("k={k} m={m} x={x}"),
                &terms,
            ));
        }
    }
    Ok(out)
}

fn residual(suite: &'static str, case: String, terms: &[Complex64]) -> Check {
    let sum: Complex64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let error = sum.norm() / scale;
    Check {
        suite,
        case,
        value: error,
        target: 0.0,
        error,
        tol: 1e-8,
    }
}

/// Gamma at a positive integer or half-integer by recurrence.
fn gamma_half_integer(x: f64) -> f64 {
    let (mut g, mut s) = if x.fract() == 0.0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while s < x {
        g *= s;
        s += 1.0;
    }
    g
}

/// `lim_{t->0} g_nu(x0, t) = pi x0^{-nu} sum_{k<2nu} x0^k / (4^nu Gamma(nu) Gamma(nu+1))`.
fn limit_t0(nu: f64, x0: f64) -> f64 {
    let sum: f64 = (0..(2.0 * nu) as i32).map(|k| x0.powi(k)).sum();
    PI * x0.powf(-nu) * sum
        / (4f64.powf(nu) * gamma_half_integer(nu) * gamma_half_integer(nu + 1.0))
}

/// `lim_{x->1} g_nu(x, t0) = 2 / (pi t0^{2nu} (J^2 + Y^2))`.
fn limit_x1(nu: f64, t0: f64) -> Result<f64> {
    let (j, y) = (bessel_j(nu, t0)?, bessel_y(nu, t0)?);
    Ok(2.0 / (PI * t0.powf(2.0 * nu) * (j * j + y * y)))
}

/// g_nu near its edges against the two limits, n in {3, 4, 5}.
pub fn gnu_limits() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let tol = 1e-4;
    for n in 3..=5u32 {
        let order = Order::halfspace(n);
        let nu = order.value();
        let g = |x: f64, t: f64| -> Result<f64> { g_nu(order, GnuPoint::new(x, t)?) };
        let x = 1.0 + 1e-6;
        let corner = g(x, 1e-6)?;
        out.push(Check::relative(
            "gnu-limit-t0",
            format!("n={n} x=1+1e-6 t=1e-6"),
            corner,
            limit_t0(nu, x),
            tol,
        ));
        out.push(Check::relative(
            "gnu-limit-x1",
            format!("n={n} x=1+1e-6 t=1e-6"),
            corner,
            limit_x1(nu, 1e-6)?,
            tol,
        ));
        out.push(Check::relative(
            "gnu-limit-t0",
            format!("n={n} x=2 t=1e-6"),
            g(2.0, 1e-6)?,
            limit_t0(nu, 2.0),
            tol,
        ));
        out.push(Check::relative(
            "gnu-limit-x1",
            format!("n={n} x=1+1e-6 t=3"),
            g(x, 3.0)?,
            limit_x1(nu, 3.0)?,
            tol,
        ));
    }
    Ok(out)
}

/// Every identity check.
pub fn all_checks() -> Result<Vec<Check>> {
    let mut out = wronskian()?;
    out.extend(hypergeometric()?);
    out.extend(ode_residuals()?);
    out.extend(gnu_limits()?);
    Ok(out)
}
