//! Half-space kernel against closed forms, limits and structural identities.

use harmeas_core::halfspace::{
    asym_boundary_c, asym_boundary_limit, asym_large_y, asym_large_y_as_stated, bounds_ratio_scan,
    laplace_mu, mu_density, mu_density_tail, mu_transform, normalization, poisson_kernel,
    poisson_kernel_scaled, HalfSpaceQuery, QuadratureSpec, ScaledQuery,
};
use harmeas_core::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn kernel(n: u32, x: f64, rho: f64) -> f64 {
    poisson_kernel(&HalfSpaceQuery::new(n, x, rho).unwrap(), &spec()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Composite Simpson rule with `m` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for k in 1..m {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt`.
fn bessel_k_integral(nu: f64, z: f64) -> f64 {
    simpson(|t| (-z * t.cosh()).exp() * (nu * t).cosh(), 0.0, 12.0, 4000)
}

/// For n = 4 the transform is elementary:
/// `e^{-(x-1)s} (x s + 1) / (x (s + 1))`, `s = sqrt(2w)`.
fn transform_n4(x: f64, s: f64) -> f64 {
    (-(x - 1.0) * s).exp() * (x * s + 1.0) / (x * (s + 1.0))
}

/// n = 4 kernel, `x` times the radial Fourier inversion of the transform in R^3.
fn kernel_n4(x: f64, rho: f64) -> f64 {
    let end = 60.0 / (x - 1.0);
    let m = 400_000;
    let inv = if rho == 0.0 {
        simpson(|k| k * k * transform_n4(x, k), 0.0, end, m) / (2.0 * PI * PI)
    } else {
        simpson(|k| k * (k * rho).sin() * transform_n4(x, k), 0.0, end, m) / (2.0 * PI * PI * rho)
    };
    x * inv
}

#[test]
fn transform_matches_bessel_k_integral() {
    let q = HalfSpaceQuery::new(3, 2.0, 0.0).unwrap();
    let got = laplace_mu(&q, Complex64::new(1.0, 0.0)).unwrap();
    let s = 2f64.sqrt();
    let want = 2f64.sqrt() * bessel_k_integral(1.0, 2.0 * s) / bessel_k_integral(1.0, s);
    assert!(rel(got.re, want) < 1e-10, "{got} vs {want}");
    assert!(got.im.abs() < 1e-15);
}

#[test]
fn transform_is_elementary_in_four_dimensions() {
    let q = HalfSpaceQuery::new(4, 1.7, 0.0).unwrap();
    for w in [0.01, 0.5, 2.0, 30.0] {
        let got = laplace_mu(&q, Complex64::new(w, 0.0)).unwrap().re;
        let want = transform_n4(1.7, (2.0 * w).sqrt());
        assert!(rel(got, want) < 1e-12, "w={w}: {got} vs {want}");
    }
}

#[test]
fn transform_limits() {
    for n in 3..=6 {
        let x = 1.6;
        let q = HalfSpaceQuery::new(n, x, 0.0).unwrap();
        let at0 = laplace_mu(&q, Complex64::new(0.0, 0.0)).unwrap().re;
        assert!(rel(at0, x.powf((2.0 - n as f64) / 2.0)) < 1e-15);
        let near0 = laplace_mu(&q, Complex64::new(1e-10, 0.0)).unwrap().re;
        assert!(rel(near0, at0) < 1e-4);
        let q1 = HalfSpaceQuery::new(n, 1.0 + 1e-12, 0.0).unwrap();
        let at_boundary = laplace_mu(&q1, Complex64::new(2.0, 0.0)).unwrap().re;
        assert!((at_boundary - 1.0).abs() < 1e-10);
    }
}

#[test]
fn transform_symmetry_and_branch_cut() {
    let q = HalfSpaceQuery::new(5, 1.3, 0.0).unwrap();
    let w = Complex64::new(0.7, 2.5);
    let a = laplace_mu(&q, w).unwrap();
    let b = laplace_mu(&q, w.conj()).unwrap();
    assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    assert!(a.norm() < 1.0);
    assert!(matches!(
        laplace_mu(&q, Complex64::new(-1.0, 0.0)),
        Err(Error::BranchCut(_))
    ));
}

#[test]
fn density_mass_and_transform_round_trip() {
    let q = HalfSpaceQuery::new(3, 1.5, 0.0).unwrap();
    let mass = mu_transform(&q, 0.0, &spec()).unwrap();
    assert!(rel(mass, 1.5f64.powf(-0.5)) < 1e-6, "{mass}");
    for w in [0.5, 1.0, 4.0] {
        let got = mu_transform(&q, w, &spec()).unwrap();
        let want = laplace_mu(&q, Complex64::new(w, 0.0)).unwrap().re;
        assert!(rel(got, want) < 1e-6, "w={w}: {got} vs {want}");
    }
}

#[test]
fn density_is_positive_with_power_tail() {
    let q = HalfSpaceQuery::new(3, 1.5, 0.0).unwrap();
    for s in [0.01, 0.1, 1.0, 10.0] {
        assert!(mu_density(&q, s, &spec()).unwrap() > 0.0);
    }
    let s = 4000.0;
    let got = mu_density(&q, s, &spec()).unwrap();
    let tail = mu_density_tail(&q, s).unwrap();
    assert!(rel(got, tail) < 2e-2, "{got} vs {tail}");
}

#[test]
fn kernel_matches_fourier_inversion_in_four_dimensions() {
    for rho in [0.0, 0.3, 1.0, 1.5, 4.0] {
        let got = kernel(4, 2.0, rho);
        let want = kernel_n4(2.0, rho);
        assert!(rel(got, want) < 1e-7, "rho={rho}: {got} vs {want}");
    }
}

#[test]
fn kernel_is_continuous_across_the_form_switch() {
    for n in [3, 4, 7] {
        let x = 1.5;
        let below = kernel(n, x, 0.5 * (1.0 - 1e-9));
        let above = kernel(n, x, 0.5 * (1.0 + 1e-9));
        assert!(rel(below, above) < 1e-8, "n={n}: {below} vs {above}");
    }
}

#[test]
fn total_mass_is_one() {
    for (n, x) in [(3, 1.5), (4, 1.2), (5, 2.5)] {
        let m = normalization(n, x, &spec()).unwrap();
        assert!((m - 1.0).abs() < 1e-6, "n={n} x={x}: {m}");
    }
}

#[test]
fn kernel_vanishes_at_the_horocycle() {
    let p_far = kernel(3, 1.5, 2.0);
    let p_near = kernel(3, 1.0 + 1e-6, 2.0);
    assert!(p_near < 1e-4 * p_far);
    let x = 1.0005;
    let limit = asym_boundary_limit(3, 2.0, &spec()).unwrap();
    let ratio = kernel(3, x, 2.0) / (x - 1.0);
    assert!(rel(ratio, limit) < 2e-2, "{ratio} vs {limit}");
}

#[test]
fn boundary_constant_is_positive_and_decreasing() {
    let c: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&y| asym_boundary_c(3, y, &spec()).unwrap())
        .collect();
    assert!(c.iter().all(|&v| v > 0.0));
    assert!(c.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn large_y_constants() {
    assert!(rel(asym_large_y_as_stated(3, 1.0).unwrap(), 1.0 / (2.0 * PI)) < 1e-14);
    assert!(rel(asym_large_y_as_stated(3, 2.0).unwrap(), 3.0 / (4.0 * PI)) < 1e-14);
    for n in 3..=6 {
        let ratio = asym_large_y(n, 1.3).unwrap() / asym_large_y_as_stated(n, 1.3).unwrap();
        assert!(rel(ratio, 4f64.powi(n as i32 - 2)) < 1e-13);
    }
    assert!(asym_large_y(3, 1.5).unwrap() < asym_large_y(3, 1.6).unwrap());
}

#[test]
fn large_y_decay_matches_constant() {
    let (x, rho) = (1.5, 1e3);
    let ratio = kernel(3, x, rho) * rho.powi(4) / (x - 1.0);
    let c = asym_large_y(3, x).unwrap();
    assert!(rel(ratio, c) < 5e-2, "{ratio} vs {c}");
}

#[test]
fn bounds_scan_is_bounded() {
    let report = bounds_ratio_scan(3, &[1.1, 1.5, 2.0], &[1.0, 5.0, 20.0], &spec()).unwrap();
    assert_eq!(report.points.len(), 9);
    assert!(report.min > 0.0 && report.max.is_finite());
    assert!(report.max / report.min < 50.0);
    assert!(bounds_ratio_scan(3, &[2.5], &[1.0], &spec()).is_err());
    assert!(bounds_ratio_scan(3, &[1.5], &[0.5], &spec()).is_err());
}

#[test]
fn scaled_kernel_reduces_to_level_one() {
    let direct = kernel(3, 1.5, 1.0);
    let q = ScaledQuery::new(2.0, vec![0.5, -1.0, 3.0], vec![0.5, 1.0]).unwrap();
    let scaled = poisson_kernel_scaled(&q, &spec()).unwrap();
    assert!(rel(scaled, direct / 4.0) < 1e-14);
    let unit = ScaledQuery::new(1.0, vec![0.0, 0.0, 1.5], vec![0.6, 0.8]).unwrap();
    assert!(rel(poisson_kernel_scaled(&unit, &spec()).unwrap(), direct) < 1e-14);
    assert!(ScaledQuery::new(2.0, vec![0.0, 0.0, 1.5], vec![0.0, 0.0]).is_err());
}

#[test]
fn invalid_queries_are_rejected() {
    assert!(HalfSpaceQuery::new(2, 1.5, 1.0).is_err());
    assert!(HalfSpaceQuery::new(3, 1.0, 1.0).is_err());
    assert!(HalfSpaceQuery::new(3, 1.5, -1.0).is_err());
    assert!(HalfSpaceQuery::new(3, f64::NAN, 1.0).is_err());
    let bad = QuadratureSpec {
        rel_tol: 1e-14,
        ..spec()
    };
    assert!(poisson_kernel(&HalfSpaceQuery::new(3, 1.5, 1.0).unwrap(), &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_is_positive_and_decreasing(n in 3u32..=5, x in 1.05f64..3.0, rho in 0.0f64..8.0) {
        let a = kernel(n, x, rho);
        let b = kernel(n, x, rho + 0.5);
        prop_assert!(a > 0.0 && a.is_finite());
        prop_assert!(b < a);
    }

    #[test]
    fn transform_is_decreasing_in_w(n in 3u32..=6, x in 1.01f64..4.0, w in 0.0f64..10.0) {
        let q = HalfSpaceQuery::new(n, x, 0.0).unwrap();
        let a = laplace_mu(&q, Complex64::new(w, 0.0)).unwrap().re;
        let b = laplace_mu(&q, Complex64::new(w + 0.1, 0.0)).unwrap().re;
        prop_assert!(b < a && b > 0.0 && a <= 1.0);
    }
}
