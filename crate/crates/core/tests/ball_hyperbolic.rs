//! Hyperbolic ball kernel against a harmonic series, the angular Green
//! function against its ODE, and the clock transform against its limits.

mod common;

use common::series_kernel;
use harmeas_core::ball_hyperbolic::{
    coef_a, coef_b, green_function_s, green_function_s_hyp, kernel_mass, laplace_mu_ball,
    poisson_kernel_ball, sphere_area, uniform_density, BallKernel, BallQuery,
};
use harmeas_core::contour::ContourSpec;
use harmeas_core::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn drift(n: u32) -> impl Fn(f64) -> f64 {
    move |s| (n as f64 - 2.0) / (1.0 - s * s)
}

#[test]
fn kernel_matches_harmonic_series() {
    for (n, r, y) in [(3, 0.5, 0.25), (4, 0.8, 0.3), (5, 0.6, 0.45)] {
        let k = BallKernel::new(n, r, y, &ContourSpec::default()).unwrap();
        for phi in [0.05, 0.4, 1.0, 2.0, 3.0] {
            let got = k.eval(phi).unwrap();
            let want = series_kernel(n, drift(n), r, y, phi, 90);
            assert!(
                rel(got, want) < 1e-5,
                "n={n} r={r} y={y} phi={phi}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn kernel_near_the_sphere_matches_harmonic_series() {
    let (n, r, y) = (3, 0.5, 0.475);
    let k = BallKernel::new(n, r, y, &ContourSpec::default()).unwrap();
    for phi in [0.2, 1.0] {
        let got = k.eval(phi).unwrap();
        let want = series_kernel(n, drift(n), r, y, phi, 700);
        assert!(rel(got, want) < 1e-5, "phi={phi}: {got} vs {want}");
    }
    assert!(matches!(k.eval(1e-3), Err(Error::Contour(_))));
}

#[test]
fn kernel_mass_is_one() {
    for (n, r, y) in [(3, 0.5, 0.25), (4, 0.9, 0.5), (6, 0.3, 0.1)] {
        let k = BallKernel::new(n, r, y, &ContourSpec::default()).unwrap();
        let m = kernel_mass(n, r, |phi| k.eval(phi), 64).unwrap();
        assert!((m - 1.0).abs() < 1e-5, "n={n}: {m}");
    }
}

#[test]
fn centered_start_is_uniform() {
    for n in [3, 4, 7] {
        let area = sphere_area(n, 0.7);
        let k = BallKernel::new(n, 0.7, 0.0, &ContourSpec::default()).unwrap();
        assert!(rel(k.eval(1.3).unwrap(), 1.0 / area) < 1e-14);
        assert!(rel(uniform_density(n, 0.7), 1.0 / area) < 1e-13);
    }
    let area3 = 4.0 * PI * 0.25;
    assert!(rel(sphere_area(3, 0.5), area3) < 1e-14);
}

#[test]
fn small_start_deviates_linearly_from_uniform() {
    let (n, r) = (3, 0.5);
    let u = uniform_density(n, r);
    let dev = |y: f64| {
        let k = BallKernel::new(n, r, y, &ContourSpec::default()).unwrap();
        (k.eval(0.0).unwrap() - u).abs() / u
    };
    let (a, b) = (dev(1e-3), dev(1e-4));
    assert!(a < 1e-2 && b < 1e-3);
    assert!((a / b - 10.0).abs() < 0.5, "{a} {b}");
}

#[test]
fn kernel_is_even_in_angle_and_decreasing() {
    let k = BallKernel::new(4, 0.6, 0.3, &ContourSpec::default()).unwrap();
    let a = k.eval(1.2).unwrap();
    let b = k.eval(2.0 * PI - 1.2).unwrap();
    assert!(rel(a, b) < 1e-12);
    let v: Vec<f64> = (0..=12)
        .map(|j| k.eval(PI * j as f64 / 12.0).unwrap())
        .collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    let q = BallQuery::new(4, 0.6, 0.3, 1.2).unwrap();
    assert!(rel(poisson_kernel_ball(&q, &ContourSpec::default()).unwrap(), a) < 1e-14);
}

#[test]
fn refined_classic_line_agrees_with_automatic() {
    let q = BallQuery::new(3, 0.5, 0.25, 0.7).unwrap();
    let auto = poisson_kernel_ball(&q, &ContourSpec::default()).unwrap();
    let spec = ContourSpec {
        nodes: Some(40001),
        ..ContourSpec::classic(3)
    };
    let classic = poisson_kernel_ball(&q, &spec).unwrap();
    assert!(rel(auto, classic) < 1e-5, "{auto} vs {classic}");
}

#[test]
fn coefficient_a() {
    for n in 3..=7 {
        assert!((coef_a(n, c(0.0, 0.0)).unwrap() - c((n as f64 - 2.0) / 2.0, 0.0)).norm() < 1e-15);
    }
    // nu = 1, z = -nu^2/4
    assert!((coef_a(4, c(-0.25, 0.0)).unwrap().re - 0.5 * 6f64.sqrt()).abs() < 1e-15);
    let z = c(0.3, 1.7);
    assert!((coef_a(5, z.conj()).unwrap() - coef_a(5, z).unwrap().conj()).norm() < 1e-15);
    assert!(matches!(coef_a(3, c(1.0, 0.0)), Err(Error::BranchCut(_))));
}

#[test]
fn coefficient_b() {
    assert!(matches!(coef_b(4, c(0.0, 0.0)), Err(Error::Pole(_))));
    let z = c(-0.25, 5.0);
    let b = coef_b(4, z).unwrap();
    assert!(b.re.is_finite() && b.im.is_finite());
    assert!((coef_b(4, z.conj()).unwrap() - b.conj()).norm() < 1e-14 * b.norm());
    // n = 4, z = -3/2: A = 2 and Gamma(nu - A) = Gamma(-1)
    assert!(coef_b(4, c(-1.5, 0.0)).is_err());
}

/// `(L - lambda) G` with `L = (1-x^2)/2 d^2 - (n-1)/2 x d`, by central differences.
fn green_residual(n: u32, lambda: Complex64, x: f64) -> f64 {
    let h = 5e-3;
    let g = |t: f64| green_function_s(n, lambda, t).unwrap();
    let d1 = (g(x - 2.0 * h) - g(x - h) * 8.0 + g(x + h) * 8.0 - g(x + 2.0 * h)) / (12.0 * h);
    let d2 = (-g(x - 2.0 * h) + g(x - h) * 16.0 - g(x) * 30.0 + g(x + h) * 16.0 - g(x + 2.0 * h))
        / (12.0 * h * h);
    let l = d2 * ((1.0 - x * x) / 2.0) - d1 * ((n as f64 - 1.0) / 2.0 * x);
    let scale = d2.norm() + d1.norm() + (g(x) * lambda).norm();
    (l - g(x) * lambda).norm() / scale
}

#[test]
fn green_function_solves_angular_equation() {
    for n in [3, 4, 5] {
        for lambda in [c(0.1, 0.0), c(0.3, 2.0), c(-0.1, 0.5)] {
            for x in [-0.5, 0.0, 0.3, 0.6] {
                let res = green_residual(n, lambda, x);
                assert!(res < 1e-8, "n={n} lambda={lambda} x={x}: {res}");
            }
        }
    }
}

#[test]
fn green_function_forms_agree() {
    for n in [3, 4, 6] {
        for lambda in [c(0.1, 0.0), c(0.2, 3.0)] {
            for x in [-0.7, 0.1, 0.8] {
                let a = green_function_s(n, lambda, x).unwrap();
                let b = green_function_s_hyp(n, lambda, x).unwrap();
                assert!(
                    (a - b).norm() < 1e-10 * a.norm(),
                    "n={n} lambda={lambda} x={x}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn green_function_has_unit_flux_at_the_pole() {
    // (1 - x^2)^{(n-1)/2} G'(x) -> 1 as x -> 1
    let x = 1.0 - 1e-6;
    let h = 1e-8;
    for n in [3, 4, 5] {
        for lambda in [c(0.1, 0.0), c(0.05, 0.0)] {
            let g = |t: f64| green_function_s(n, lambda, t).unwrap();
            let d = (g(x + h) - g(x - h)) / (2.0 * h);
            let flux = (1.0 - x * x).powf((n as f64 - 1.0) / 2.0) * d.re;
            assert!((flux - 1.0).abs() < 2e-4, "n={n} lambda={lambda}: {flux}");
        }
    }
}

#[test]
fn green_function_diverges_as_lambda_vanishes() {
    let g = green_function_s(3, c(1e-4, 0.0), 0.0).unwrap();
    assert!(g.re > 1e3, "{g}");
}

#[test]
fn clock_transform_limits() {
    let (n, r, y) = (4, 0.8, 0.4);
    let q = BallQuery::new(n, r, y, 0.0).unwrap();
    let nu = q.nu();
    let at0 = laplace_mu_ball(&q, c(0.0, 0.0)).unwrap();
    let want = ((1.0 - r * r) / (1.0 - y * y)).powf(nu);
    assert!((at0.re - want).abs() < 1e-13 && at0.im.abs() < 1e-15);
    let w = c(1.0, 3.0);
    let v = laplace_mu_ball(&q, w).unwrap();
    assert!(v.norm() <= 2.0);
    let near = BallQuery::new(n, r, r * (1.0 - 1e-12), 0.0).unwrap();
    assert!((laplace_mu_ball(&near, w).unwrap() - c(1.0, 0.0)).norm() < 1e-9);
    assert!(laplace_mu_ball(&q, c(-nu * nu, 0.0)).is_err());
    assert!(laplace_mu_ball(&BallQuery::new(n, r, 0.0, 0.0).unwrap(), w).is_err());
}

#[test]
fn invalid_queries_are_rejected() {
    assert!(BallQuery::new(2, 0.5, 0.1, 0.0).is_err());
    assert!(BallQuery::new(3, 1.0, 0.1, 0.0).is_err());
    assert!(BallQuery::new(3, 0.5, 0.5, 0.0).is_err());
    assert!(BallQuery::new(3, 0.5, -0.1, 0.0).is_err());
    assert!(BallQuery::new(3, 0.5, 0.1, f64::NAN).is_err());
    assert!(green_function_s(3, c(1.0, 0.0), 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn clock_transform_is_a_subprobability(n in 3u32..=6, r in 0.1f64..0.9, t in 0.05f64..0.95, w in 0.0f64..20.0) {
        let q = BallQuery::new(n, r, r * t, 0.0).unwrap();
        let v = laplace_mu_ball(&q, c(w, 0.0)).unwrap();
        let at0 = laplace_mu_ball(&q, c(0.0, 0.0)).unwrap().re;
        prop_assert!(v.re > 0.0 && v.re <= at0 * (1.0 + 1e-12));
        prop_assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn kernel_is_positive(r in 0.2f64..0.9, t in 0.1f64..0.9, phi in 0.0f64..PI) {
        let q = BallQuery::new(3, r, r * t, phi).unwrap();
        let p = poisson_kernel_ball(&q, &ContourSpec::default()).unwrap();
        prop_assert!(p > 0.0 && p.is_finite());
    }
}
