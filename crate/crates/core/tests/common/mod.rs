//! Spherical-harmonic series for exit laws of `Delta/2 + c(|x|) x . grad`
//! from a centered ball, with the radial equations integrated by RK4.

use std::f64::consts::PI;

/// Ratio `f_k(y) / f_k(r)` of the regular radial solution of degree `k`,
/// `f'' + (n-1)/s f' + 2 c(s) s f' - k(k+n-2)/s^2 f = 0`.
fn radial_ratio<C: Fn(f64) -> f64>(n: u32, k: u32, c: &C, y: f64, r: f64) -> f64 {
    // f = s^k g, t = ln s: g'' + (2k+n-2) g' + 2 c s^2 (g' + k g) = 0
    let kf = k as f64;
    let a = 2.0 * kf + n as f64 - 2.0;
    let rhs = |t: f64, g: f64, dg: f64| {
        let s = t.exp();
        -a * dg - 2.0 * c(s) * s * s * (dg + kf * g)
    };
    let t0 = (1e-7f64).ln();
    let integrate = |end: f64| {
        let steps = (((end - t0) / (1.0 / a).min(2e-3)).ceil() as usize).max(1);
        let h = (end - t0) / steps as f64;
        let (mut t, mut g, mut dg) = (t0, 1.0, 0.0);
        for _ in 0..steps {
            let k1 = (dg, rhs(t, g, dg));
            let k2 = (
                dg + 0.5 * h * k1.1,
                rhs(t + 0.5 * h, g + 0.5 * h * k1.0, dg + 0.5 * h * k1.1),
            );
            let k3 = (
                dg + 0.5 * h * k2.1,
                rhs(t + 0.5 * h, g + 0.5 * h * k2.0, dg + 0.5 * h * k2.1),
            );
            let k4 = (dg + h * k3.1, rhs(t + h, g + h * k3.0, dg + h * k3.1));
            g += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            dg += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            t += h;
        }
        g
    };
    (y / r).powi(k as i32) * integrate(y.ln()) / integrate(r.ln())
}

/// Gegenbauer polynomials `C_k^alpha(t)`, `k < count`.
fn gegenbauer(alpha: f64, t: f64, count: usize) -> Vec<f64> {
    let mut c = vec![1.0, 2.0 * alpha * t];
    for k in 2..count {
        let kf = k as f64;
        let next =
            (2.0 * t * (kf + alpha - 1.0) * c[k - 1] - (kf + 2.0 * alpha - 2.0) * c[k - 2]) / kf;
        c.push(next);
    }
    c.truncate(count);
    c
}

/// Exit density on the sphere of radius `r` from `|x| = y`, angle `phi`.
pub fn series_kernel<C: Fn(f64) -> f64>(
    n: u32,
    c: C,
    r: f64,
    y: f64,
    phi: f64,
    terms: usize,
) -> f64 {
    let nf = n as f64;
    let alpha = nf / 2.0 - 1.0;
    let g = gegenbauer(alpha, phi.cos(), terms);
    let mut s = 0.0;
    for (k, ck) in g.iter().enumerate() {
        let zonal = (2.0 * k as f64 + nf - 2.0) / (nf - 2.0) * ck;
        s += radial_ratio(n, k as u32, &c, y, r) * zonal;
    }
    let area = 2.0 * PI.powf(nf / 2.0) / gamma_half(n) * r.powf(nf - 1.0);
    s / area
}

/// `Gamma(n/2)` by the half-integer recurrence.
pub fn gamma_half(n: u32) -> f64 {
    let mut g = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while v < n as f64 / 2.0 {
        g *= v;
        v += 1.0;
    }
    g
}
