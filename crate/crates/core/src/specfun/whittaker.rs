//! Whittaker's M_{k,m}(x) = e^{-x/2} x^{m+1/2} M(m - k + 1/2, 1 + 2m, x).

use super::{c, check_finite, hyp1f1, is_pole};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// M_{k,m}(x) for real k, complex m, x > 0.
pub fn whittaker_m(k: f64, m: Complex64, x: f64) -> Result<Complex64> {
    check_finite(m, "Whittaker m")?;
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("Whittaker M needs x > 0, got {x}")));
    }
    let b = m * 2.0 + 1.0;
    if is_pole(b) {
        return Err(Error::Pole(format!("Whittaker M with 1 + 2m = {b}")));
    }
    let f = hyp1f1(m - k + 0.5, b, x)?;
    Ok(f * ((m + 0.5) * x.ln() - c(0.5 * x, 0.0)).exp())
}
