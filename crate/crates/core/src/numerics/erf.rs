//! Error function of complex argument.
//!
//! The first quadrant is covered by two methods:
//!
//! ```text
//! |z| < 6 and Re z <= 2 :  erf z = 2/sqrt(pi) sum_n (-1)^n z^(2n+1) / (n! (2n+1))
//! otherwise              :  erf z = 1 - exp(-z^2) w(i z)
//! ```
//!
//! with the Faddeeva function `w` from the Laplace continued fraction, which
//! converges in the upper half plane. The other quadrants follow from
//! `erf(-z) = -erf(z)` and `erf(conj z) = conj erf(z)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_2_SQRT_PI;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SERIES_RADIUS: f64 = 6.0;
const SERIES_MAX_RE: f64 = 2.0;

/// `erf(z)` for finite complex `z`.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    Ok(reflect(z, erf_first_quadrant(z.re.abs(), z.im.abs())))
}

/// `exp(-(Im z)^2) erf(z)`, finite wherever `erf` would overflow through its
/// imaginary part.
pub fn erf_scaled(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    Ok(reflect(z, erf_scaled_first_quadrant(z.re.abs(), z.im.abs())))
}

/// Real error function, routed through the complex kernel.
pub fn erf(x: f64) -> f64 {
    let v = erf_first_quadrant(x.abs(), 0.0).re;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Complementary error function for real `x`, accurate in the far tail.
pub fn erfc(x: f64) -> f64 {
    if x < 2.5 {
        return 1.0 - erf(x);
    }
    // erfc x = exp(-x^2) w(i x)
    (-x * x).exp() * faddeeva_upper(Complex64::new(0.0, x)).re
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-i z)` for `Im z >= 0` and `|z|`
/// away from the origin (the continued fraction region).
pub fn faddeeva_upper(z: Complex64) -> Complex64 {
    let a = z.norm();
    let depth = if a > 12.0 {
        24
    } else if a > 8.0 {
        40
    } else {
        90
    };
    let mut t = z;
    for k in (1..=depth).rev() {
        t = z - 0.5 * k as f64 / t;
    }
    Complex64::new(0.0, FRAC_1_SQRT_PI) / t
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("erf argument must be finite, got {z}")))
    }
}

/// Maps a first-quadrant value back to the quadrant of `z`.
fn reflect(z: Complex64, v: Complex64) -> Complex64 {
    let v = if (z.re < 0.0) != (z.im < 0.0) { v.conj() } else { v };
    if z.re < 0.0 {
        -v
    } else {
        v
    }
}

fn in_series_region(x: f64, y: f64) -> bool {
    x <= SERIES_MAX_RE && x * x + y * y < SERIES_RADIUS * SERIES_RADIUS
}

fn erf_first_quadrant(x: f64, y: f64) -> Complex64 {
    let z = Complex64::new(x, y);
    if in_series_region(x, y) {
        maclaurin(z)
    } else {
        let iz = Complex64::new(-y, x);
        Complex64::new(1.0, 0.0) - (-z * z).exp() * faddeeva_upper(iz)
    }
}

fn erf_scaled_first_quadrant(x: f64, y: f64) -> Complex64 {
    if in_series_region(x, y) {
        return maclaurin(Complex64::new(x, y)) * (-y * y).exp();
    }
    // exp(-y^2) - exp(-y^2 - z^2) w(iz), and -y^2 - z^2 = -x^2 - 2ixy
    let iz = Complex64::new(-y, x);
    let phase = Complex64::new(-x * x, -2.0 * x * y).exp();
    Complex64::new((-y * y).exp(), 0.0) - phase * faddeeva_upper(iz)
}

fn maclaurin(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let threshold = z2.norm();
    for n in 1..400 {
        term *= -z2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if (n as f64) > threshold && contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}
