//! Fresnel integrals in the `pi u^2 / 2` convention.
//!
//! ```text
//! C(x) = int_0^x cos(pi u^2 / 2) du,   S(x) = int_0^x sin(pi u^2 / 2) du
//! C(x) + i S(x) = (1 + i)/2 * erf( sqrt(pi)/2 * (1 - i) x )
//! ```

use super::erf::erf_complex;
use crate::error::{Error, Result};
use num_complex::Complex64;

const HALF_SQRT_PI: f64 = 0.886_226_925_452_758;

/// Returns `(C(x), S(x))`. Oddness is applied structurally, so
/// `fresnel(-x) == (-C, -S)` bit for bit.
pub fn fresnel(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::domain(format!("fresnel argument must be finite, got {x}")));
    }
    let a = x.abs();
    let z = Complex64::new(HALF_SQRT_PI * a, -HALF_SQRT_PI * a);
    let v = Complex64::new(0.5, 0.5) * erf_complex(z)?;
    Ok(if x < 0.0 { (-v.re, -v.im) } else { (v.re, v.im) })
}
