//! OU ball kernel against a harmonic series, the flat limit, and the
//! behaviour of the printed closed form.

mod common;

use common::series_kernel;
use harmeas_core::ball_hyperbolic::{kernel_mass, sphere_area};
use harmeas_core::ball_ou::{
    flat_ball_kernel, laplace_mu_ou, laplace_mu_ou_as_printed, poisson_kernel_ou_as_printed,
    poisson_kernel_ou_ball, whittaker_index, whittaker_mu, OuBallKernel, OuBallQuery, OuVariant,
};
use harmeas_core::contour::ContourSpec;
use harmeas_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn kernel_matches_harmonic_series() {
    for (n, lambda, r, y) in [(3, 0.5, 1.0, 0.4), (3, 2.0, 1.5, 0.9), (5, 1.0, 0.8, 0.3)] {
        let k = OuBallKernel::new(n, lambda, r, y, &ContourSpec::default()).unwrap();
        for phi in [0.05, 0.5, 1.5, 2.5, 3.1] {
            let got = k.eval(phi).unwrap();
            let want = series_kernel(n, move |_| lambda, r, y, phi, 90);
            assert!(
                rel(got, want) < 1e-5,
                "n={n} lambda={lambda} phi={phi}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn kernel_mass_is_one() {
    for (n, lambda, r, y) in [(3, 0.5, 1.0, 0.4), (4, 3.0, 1.2, 0.6), (6, 0.2, 2.0, 1.0)] {
        let k = OuBallKernel::new(n, lambda, r, y, &ContourSpec::default()).unwrap();
        let m = kernel_mass(n, r, |phi| k.eval(phi), 64).unwrap();
        assert!((m - 1.0).abs() < 1e-5, "n={n} lambda={lambda}: {m}");
    }
}

#[test]
fn weak_drift_approaches_flat_kernel() {
    let (n, r, y) = (3, 1.0, 0.4);
    let k = OuBallKernel::new(n, 1e-6, r, y, &ContourSpec::default()).unwrap();
    for phi in [0.2, 1.0, 2.5] {
        let got = k.eval(phi).unwrap();
        let flat = flat_ball_kernel(n, r, y, phi);
        assert!(rel(got, flat) < 1e-4, "phi={phi}: {got} vs {flat}");
    }
}

#[test]
fn flat_kernel_closed_form() {
    // n = 3, r = 1, x = 0: uniform density 1/(4 pi)
    assert!(rel(flat_ball_kernel(3, 1.0, 0.0, 0.7), 1.0 / (4.0 * PI)) < 1e-14);
    let v = flat_ball_kernel(3, 1.0, 0.5, 0.0);
    assert!(rel(v, 0.75 / (4.0 * PI * 0.125)) < 1e-14);
}

#[test]
fn centered_start_is_uniform() {
    let k = OuBallKernel::new(4, 1.5, 0.9, 0.0, &ContourSpec::default()).unwrap();
    assert!(rel(k.eval(2.0).unwrap(), 1.0 / sphere_area(4, 0.9)) < 1e-14);
}

#[test]
fn variant_dispatch() {
    let q = OuBallQuery::new(3, 0.5, 0.8, 0.4, 1.0).unwrap();
    let spec = ContourSpec::default();
    let derived = poisson_kernel_ou_ball(&q, &spec, OuVariant::Derived).unwrap();
    let direct = OuBallKernel::new(3, 0.5, 0.8, 0.4, &spec)
        .unwrap()
        .eval(1.0)
        .unwrap();
    assert_eq!(derived, direct);
    let printed = poisson_kernel_ou_ball(&q, &spec, OuVariant::AsPrinted).unwrap();
    assert_eq!(printed, poisson_kernel_ou_as_printed(&q, &spec).unwrap());
    assert!(printed.is_finite());
    assert_eq!(OuVariant::default(), OuVariant::Derived);
}

#[test]
fn printed_form_is_undefined_outside_its_range() {
    let spec = ContourSpec::default();
    let at_unit = OuBallQuery::new(3, 0.5, 1.0, 0.4, 1.0).unwrap();
    assert!(poisson_kernel_ou_as_printed(&at_unit, &spec).is_err());
    let centered = OuBallQuery::new(3, 0.5, 0.8, 0.0, 1.0).unwrap();
    assert!(poisson_kernel_ou_as_printed(&centered, &spec).is_err());
}

#[test]
fn printed_form_does_not_integrate_to_one() {
    let spec = ContourSpec::default();
    let (n, lambda, r, y) = (3, 0.5, 0.8, 0.4);
    let printed = |phi: f64| {
        let q = OuBallQuery::new(n, lambda, r, y, phi)?;
        poisson_kernel_ou_as_printed(&q, &spec)
    };
    let m = kernel_mass(n, r, printed, 48).unwrap();
    assert!((m - 1.0).abs() > 1e-2, "{m}");
}

#[test]
fn clock_transform_limits() {
    let (n, lambda, r, y) = (3, 1.0, 1.0, 0.5);
    let q = OuBallQuery::new(n, lambda, r, y, 0.0).unwrap();
    // w = 0: the mean weight exp(-lambda (r^2 - |x|^2) / 2)
    let at0 = laplace_mu_ou(&q, c(0.0, 0.0)).unwrap();
    assert!(rel(at0.re, (-lambda * (r * r - y * y) / 2.0).exp()) < 1e-12 && at0.im.abs() < 1e-14);
    let near = OuBallQuery::new(n, lambda, r, r * (1.0 - 1e-12), 0.0).unwrap();
    assert!((laplace_mu_ou(&near, c(2.0, 1.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-9);
    let w = c(0.4, 2.0);
    let a = laplace_mu_ou(&q, w).unwrap();
    assert!((laplace_mu_ou(&q, w.conj()).unwrap() - a.conj()).norm() < 1e-13 * a.norm());
    assert!(laplace_mu_ou(&q, c(-0.2, 0.0)).is_err());
    assert!(laplace_mu_ou(&OuBallQuery::new(n, lambda, r, 0.0, 0.0).unwrap(), w).is_err());
    assert!(laplace_mu_ou_as_printed(&q, w).unwrap().norm().is_finite());
}

#[test]
fn whittaker_parameters() {
    assert_eq!(whittaker_index(4), -1.0);
    assert!((whittaker_mu(3, c(0.0, 0.0)) - c(0.25, 0.0)).norm() < 1e-16);
    assert!((whittaker_mu(4, c(1.5, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn invalid_queries_are_rejected() {
    assert!(OuBallQuery::new(2, 0.5, 1.0, 0.4, 0.0).is_err());
    assert!(OuBallQuery::new(3, 0.0, 1.0, 0.4, 0.0).is_err());
    assert!(OuBallQuery::new(3, -1.0, 1.0, 0.4, 0.0).is_err());
    assert!(OuBallQuery::new(3, 0.5, 1.0, 1.0, 0.0).is_err());
    assert!(OuBallQuery::new(3, 0.5, 0.0, 0.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn clock_transform_is_a_subprobability(n in 3u32..=6, lambda in 0.05f64..3.0, r in 0.3f64..2.0, t in 0.05f64..0.95, w in 0.0f64..20.0) {
        let q = OuBallQuery::new(n, lambda, r, r * t, 0.0).unwrap();
        let v = laplace_mu_ou(&q, c(w, 0.0)).unwrap();
        let at0 = laplace_mu_ou(&q, c(0.0, 0.0)).unwrap().re;
        prop_assert!(v.re > 0.0 && v.re <= at0 * (1.0 + 1e-12));
        prop_assert!(at0 <= 1.0);
    }

    #[test]
    fn kernel_is_positive(lambda in 0.05f64..3.0, t in 0.1f64..0.9, phi in 0.0f64..PI) {
        let q = OuBallQuery::new(3, lambda, 1.0, t, phi).unwrap();
        let p = poisson_kernel_ou_ball(&q, &ContourSpec::default(), OuVariant::Derived).unwrap();
        prop_assert!(p > 0.0 && p.is_finite());
    }
}
