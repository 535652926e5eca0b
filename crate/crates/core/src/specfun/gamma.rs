//! Gamma, log-Gamma, reciprocal Gamma and digamma for complex arguments.
//!
//! Stirling's series after an upward shift to `|z| >= 15`, reflection for
//! `Re z < 1/2`. The reflection uses a log-sine that stays finite for large
//! imaginary parts, so `ln_gamma` works far beyond the overflow range of
//! `gamma`.

use super::{c, check_finite, is_pole, nonpositive_int};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_RADIUS: f64 = 15.0;

/// Taylor coefficients of 1/Gamma(z) = sum c_k z^k, k = 1..30.
pub(super) const RGAMMA_TAYLOR: [f64; 30] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
    1.714_406_321_927_337_433_4e-20,
];

/// B_{2k} / (2k (2k-1)), k = 1..11.
const STIRLING: [f64; 11] = [
    0.083_333_333_333_333_333,
    -0.002_777_777_777_777_777_8,
    0.000_793_650_793_650_793_65,
    -0.000_595_238_095_238_095_24,
    0.000_841_750_841_750_841_75,
    -0.001_917_526_917_526_917_5,
    0.006_410_256_410_256_410_3,
    -0.029_550_653_594_771_242,
    0.179_644_372_368_830_57,
    -1.392_432_216_905_901_1,
    13.402_864_044_168_392,
];

/// B_{2k} / (2k), k = 1..11, for the digamma asymptotic series.
const DIGAMMA_ASY: [f64; 11] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174611.0 / 6600.0,
    77683.0 / 276.0,
];

fn stirling(z: Complex64) -> Complex64 {
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut s = Complex64::new(0.0, 0.0);
    let mut p = zi;
    for &b in STIRLING.iter() {
        s += p * b;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + s
}

/// `ln sin(pi z)`, finite for any `z` off the real integers.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = c(0.0, 1.0);
    if z.im > 0.0 {
        let e = (i * 2.0 * PI * z).exp();
        -i * PI * z + ((e - 1.0) / (i * 2.0)).ln()
    } else {
        let e = (-i * 2.0 * PI * z).exp();
        i * PI * z + ((1.0 - e) / (i * 2.0)).ln()
    }
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT_RADIUS {
        acc += z.ln();
        z += 1.0;
    }
    stirling(z) - acc
}

/// A logarithm of Gamma(z).
///
/// For `Re z >= 1/2` this is the principal branch (continuous from the
/// positive axis). For the reflected half-plane only `exp` of the result is
/// meaningful; the imaginary part may differ from the principal branch by a
/// multiple of `2 pi`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "ln_gamma argument")?;
    if is_pole(z) {
        return Err(Error::Pole(format!("Gamma has a pole at {z}")));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(c(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    }
}

/// Gamma(z) for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "gamma argument")?;
    if is_pole(z) {
        return Err(Error::Pole(format!("Gamma has a pole at {z}")));
    }
    if z.im == 0.0 {
        return Ok(c(gamma_real(z.re)?, 0.0));
    }
    Ok(ln_gamma(z)?.exp())
}

/// Above this the real path uses Stirling's series directly.
const REAL_RECURRENCE_MAX: f64 = 30.0;

/// 1/Gamma(1+t) for |t| <= 1/2.
fn rgamma_taylor(t: f64) -> f64 {
    RGAMMA_TAYLOR
        .iter()
        .rev()
        .fold(0.0, |acc, &ck| acc * t + ck)
}

/// sin(pi x) with exact argument reduction.
fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// 1/Gamma(x) for real `x >= 1/2`.
fn rgamma_right_real(x: f64) -> f64 {
    if x > REAL_RECURRENCE_MAX {
        return (-ln_gamma_right(c(x, 0.0)).re).exp();
    }
    // Gamma(1 + t + m) = Gamma(1 + t) (t + 1) ... (t + m)
    let m = (x - 0.5).floor();
    let t = x - 1.0 - m;
    let mut p = 1.0;
    for j in 1..=m as i64 {
        p *= t + j as f64;
    }
    rgamma_taylor(t) / p
}

/// 1/Gamma(x) for real `x`.
fn rgamma_real(x: f64) -> f64 {
    if x >= 0.5 {
        rgamma_right_real(x)
    } else {
        sin_pi(x) / (PI * rgamma_right_real(1.0 - x))
    }
}

/// Gamma(x) for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    let z = c(x, 0.0);
    check_finite(z, "gamma argument")?;
    if is_pole(z) {
        return Err(Error::Pole(format!("Gamma has a pole at {x}")));
    }
    if x >= 0.5 {
        Ok(1.0 / rgamma_right_real(x))
    } else {
        Ok(PI * rgamma_right_real(1.0 - x) / sin_pi(x))
    }
}

/// 1/Gamma(z); entire, exactly zero at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if let Some((_, d)) = nonpositive_int(z) {
        if d == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
    }
    if z.im == 0.0 {
        return c(rgamma_real(z.re), 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi
        (ln_sin_pi(z) + ln_gamma_right(1.0 - z) - PI.ln()).exp()
    }
}

/// Digamma psi(z) = Gamma'(z)/Gamma(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_finite(z, "digamma argument")?;
    if is_pole(z) {
        return Err(Error::Pole(format!("digamma has a pole at {z}")));
    }
    if z.re < 0.5 {
        // psi(z) = psi(1-z) - pi cot(pi z)
        let cot = (c(PI, 0.0) * z).cos() / (c(PI, 0.0) * z).sin();
        let cot = if cot.re.is_finite() && cot.im.is_finite() {
            cot
        } else {
            c(0.0, -z.im.signum())
        };
        return Ok(digamma(1.0 - z)? - cot * PI);
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT_RADIUS {
        acc += z.inv();
        z += 1.0;
    }
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut s = Complex64::new(0.0, 0.0);
    let mut p = zi2;
    for &b in DIGAMMA_ASY.iter() {
        s += p * b;
        p *= zi2;
    }
    Ok(z.ln() - zi * 0.5 - s - acc)
}
