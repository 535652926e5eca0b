//! Legendre functions of complex degree and real order, built on 2F1.
//!
//! P uses the hypergeometric representation with argument (1 - x)/2: the
//! Ferrers form on (-1, 1) and the form with ((x+1)/(x-1))^(b/2) for x > 1.
//! Q (x > 1) uses the representation in 1/x^2.

use super::{c, check_finite, gamma, hyp2f1, is_pole, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// P_a^b(x) for complex degree `a`, real order `b`, x > -1.
pub fn legendre_p(a: Complex64, b: f64, x: f64) -> Result<Complex64> {
    check_finite(a, "Legendre degree")?;
    if !x.is_finite() || x <= -1.0 {
        return Err(Error::Domain(format!("Legendre P needs x > -1, got {x}")));
    }
    let cc = c(1.0 - b, 0.0);
    if is_pole(cc) {
        return Err(Error::Pole(format!(
            "Legendre P with 1 - b = {} a nonpositive integer",
            1.0 - b
        )));
    }
    if x == 1.0 {
        return if b == 0.0 {
            Ok(c(1.0, 0.0))
        } else if b < 0.0 {
            Ok(c(0.0, 0.0))
        } else {
            Err(Error::Domain(
                "Legendre P with positive order is singular at x = 1".into(),
            ))
        };
    }
    let ratio = if x < 1.0 {
        (1.0 + x) / (1.0 - x)
    } else {
        (x + 1.0) / (x - 1.0)
    };
    let f = hyp2f1(-a, a + 1.0, cc, (1.0 - x) / 2.0)?;
    Ok(f * rgamma(cc) * ratio.powf(0.5 * b))
}

/// Q_a^b(x) for x > 1 (Hobson's convention, including the factor e^{i b pi}).
pub fn legendre_q(a: Complex64, b: f64, x: f64) -> Result<Complex64> {
    check_finite(a, "Legendre degree")?;
    if !x.is_finite() || x <= 1.0 {
        return Err(Error::Domain(format!("Legendre Q needs x > 1, got {x}")));
    }
    let g = gamma(a + b + 1.0)?;
    let f = hyp2f1(
        a * 0.5 + b * 0.5 + 1.0,
        (a + b + 1.0) * 0.5,
        a + 1.5,
        1.0 / (x * x),
    );
    // the regularized 2F1 stays finite when a + 3/2 is a nonpositive integer
    let f = match f {
        Ok(v) => v * rgamma(a + 1.5),
        Err(Error::Pole(_)) => {
            return Err(Error::Pole(format!(
                "Legendre Q with a + 3/2 = {} a pole",
                a + 1.5
            )))
        }
        Err(e) => return Err(e),
    };
    let phase = c(0.0, b * PI).exp();
    let pow = (-(a + b + 1.0) * x.ln() - (a + 1.0) * 2f64.ln()).exp();
    Ok(phase * PI.sqrt() * g * (x * x - 1.0).powf(0.5 * b) * pow * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one() {
        for &x in &[-0.7, 0.0, 0.4, 1.5, 3.0] {
            let v = legendre_p(c(1.0, 0.0), 0.0, x).unwrap();
            assert!((v - c(x, 0.0)).norm() < 1e-14);
        }
        let v = legendre_p(c(0.5, 0.0), 0.0, 1.0).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn q_classical() {
        let q0 = legendre_q(c(0.0, 0.0), 0.0, 2.0).unwrap();
        assert!((q0.re - 0.5 * 3.0f64.ln()).abs() < 1e-14);
        let q1 = legendre_q(c(1.0, 0.0), 0.0, 2.0).unwrap();
        assert!((q1.re - (3.0f64.ln() - 1.0)).abs() < 1e-14);
    }
}
