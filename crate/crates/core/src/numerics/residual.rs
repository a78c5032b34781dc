//! Finite-difference residual of the master equation in `(x, x')`:
//!
//! ```text
//! d rho/dt = (i hbar / 2m)(d_x^2 - d_x'^2) rho - gamma (x - x')(d_x - d_x') rho
//!            - (i/hbar)(V(x) - V(x')) rho - (D/hbar^2)(x - x')^2 rho,   V = m g x
//! ```

use crate::model::{Environment, ModelConstants};
use num_complex::Complex64;

/// Residual and the magnitudes it should be compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClResidual {
    pub residual: Complex64,
    pub time_derivative: Complex64,
    /// Largest magnitude among the individual terms, with the `x` and `x'`
    /// pieces of the kinetic and friction terms counted separately (they
    /// nearly cancel near the diagonal).
    pub scale: f64,
}

impl ClResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.scale
        }
    }
}

/// `d rho/dt - rhs` with second-order central differences of step `h`.
pub fn residual_cl<F: Fn(f64, f64, f64) -> Complex64>(
    rho: F,
    point: (f64, f64, f64),
    h: f64,
    env: &Environment,
    c: &ModelConstants,
) -> Complex64 {
    residual_cl_terms(rho, point, h, env, c).residual
}

pub fn residual_cl_terms<F: Fn(f64, f64, f64) -> Complex64>(
    rho: F,
    (x, xp, t): (f64, f64, f64),
    h: f64,
    env: &Environment,
    c: &ModelConstants,
) -> ClResidual {
    let d = env.diffusion(c);
    let i = Complex64::new(0.0, 1.0);
    let r0 = rho(x, xp, t);
    let dt = (rho(x, xp, t + h) - rho(x, xp, t - h)) / (2.0 * h);
    let xp1 = rho(x + h, xp, t);
    let xm1 = rho(x - h, xp, t);
    let yp1 = rho(x, xp + h, t);
    let ym1 = rho(x, xp - h, t);
    let dxx = (xp1 - 2.0 * r0 + xm1) / (h * h);
    let dyy = (yp1 - 2.0 * r0 + ym1) / (h * h);
    let dx = (xp1 - xm1) / (2.0 * h);
    let dy = (yp1 - ym1) / (2.0 * h);
    let sep = x - xp;

    let kinetic = i * c.hbar / (2.0 * c.mass) * (dxx - dyy);
    let friction = -env.gamma * sep * (dx - dy);
    let potential = -i / c.hbar * (c.mass * c.g * sep) * r0;
    let decoherence = -d / (c.hbar * c.hbar) * sep * sep * r0;
    let residual = dt - (kinetic + friction + potential + decoherence);
    let half = i * c.hbar / (2.0 * c.mass);
    let pieces = [
        dt,
        half * dxx,
        half * dyy,
        env.gamma * sep * dx,
        env.gamma * sep * dy,
        potential,
        decoherence,
    ];
    let scale = pieces
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ClResidual {
        residual,
        time_derivative: dt,
        scale,
    }
}
