//! Plane wave released from a shutter at the origin, in the
//! negligible-dissipation limit where only the diffusion term acts.
//!
//! The beam density is
//!
//! ```text
//! P(x, t) = m / (2 pi hbar t) int_{-inf}^0 f(x, t, R') dR'
//! f       = hbar sqrt(3 pi / (D t)) Re[e^{-y^2} erf(z)],   z = -2 R' sqrt(a) + i y
//! a       = D t / (3 hbar^2),   y = sqrt(3) (hbar k t + m (R' - x)) / (2 sqrt(D) t^{3/2})
//! ```
//!
//! and reduces at `D = 0` to `f = -2 sin(2 R' b) / b`, `b = (hbar k t + m (R' - x)) / (hbar t)`,
//! whose integral is a Fresnel expression.

use crate::error::{Error, Result};
use crate::model::{Environment, ModelConstants};
use crate::numerics::{erf_scaled, fresnel, Quadrature};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Width of the panels the `R'` integral is split into.
const PANEL: f64 = 2.0;

/// Free-particle propagator with the diffusion damping term.
pub fn shutter_propagator(
    (x, y): (f64, f64),
    t: f64,
    (xp, yp): (f64, f64),
    d: f64,
    c: &ModelConstants,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("propagator needs t > 0, got {t}")));
    }
    let ModelConstants { hbar, mass, .. } = *c;
    let phase = mass / (2.0 * hbar * t) * ((x - xp).powi(2) - (y - yp).powi(2));
    let (u, v) = (x - y, xp - yp);
    let damping = -d * t / (3.0 * hbar * hbar) * (u * u + u * v + v * v);
    Ok(mass / (2.0 * PI * hbar * t) * Complex64::new(damping, phase).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShutterConfig {
    pub k: f64,
    pub env: Environment,
    pub c: ModelConstants,
    /// Lower cutoff of the `R'` integral; `None` picks a time-dependent default.
    pub r_min: Option<f64>,
    pub tol: f64,
}

impl ShutterConfig {
    pub fn new(k: f64, env: Environment, c: ModelConstants) -> Result<Self> {
        let cfg = Self {
            k,
            env,
            c,
            r_min: None,
            tol: 1e-10,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_r_min(mut self, r_min: f64) -> Self {
        self.r_min = Some(r_min);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.c.validate()?;
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::domain("shutter wavenumber must be positive"));
        }
        if let Some(r) = self.r_min {
            if !(r < 0.0 && r.is_finite()) {
                return Err(Error::domain("shutter cutoff must be negative"));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("shutter tolerance must be positive"));
        }
        Ok(())
    }

    pub fn diffusion(&self) -> f64 {
        self.env.diffusion(&self.c)
    }

    /// Cutoff used at time `t`: the configured value, or
    /// `min(-200, -10 (k t hbar/m + sqrt t))`.
    pub fn cutoff(&self, t: f64) -> f64 {
        self.r_min.unwrap_or_else(|| {
            let front = self.c.hbar * self.k * t / self.c.mass;
            (-200.0f64).min(-10.0 * (front + t.sqrt()))
        })
    }

    /// Message when `gamma t` leaves the negligible-dissipation regime.
    pub fn regime_warning(&self, t_max: f64) -> Option<String> {
        let gt = self.env.gamma * t_max;
        (gt > 0.05).then(|| format!("gamma * t_max = {gt:.3} exceeds 0.05; friction is not negligible"))
    }

    pub fn integrand(&self, x: f64, t: f64, r: f64) -> Result<f64> {
        shutter_integrand(x, t, r, self.k, self.diffusion(), &self.c)
    }

    /// Beam density, by quadrature for `D > 0` and in closed form for `D = 0`.
    pub fn density(&self, x: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("shutter density needs t > 0, got {t}")));
        }
        let d = self.diffusion();
        if d == 0.0 {
            return shutter_density_zero_t(x, t, self.k, &self.c);
        }
        let ModelConstants { hbar, mass, .. } = self.c;
        let r_min = self.cutoff(t);
        let a = d * t / (3.0 * hbar * hbar);
        let centre = x - hbar * self.k * t / mass;
        let envelope = 2.0 * d.sqrt() * t.powf(1.5) / (3f64.sqrt() * mass);
        // below both limits the integrand is below e^-40 of its scale
        let lower = r_min.max((centre - 12.0 * envelope).min(-(10.0 / a).sqrt()));
        let mut cuts = vec![lower];
        let mut r = lower + PANEL;
        while r < 0.0 {
            cuts.push(r);
            r += PANEL;
        }
        cuts.push(0.0);
        if centre > lower && centre < 0.0 {
            cuts.push(centre);
            cuts.sort_by(f64::total_cmp);
        }
        let q = Quadrature::new(self.tol).with_abs_tol(self.tol * 1e-2);
        let mut total = 0.0;
        let mut evaluations = 0;
        let mut error = 0.0;
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            let res = q
                .integrate(|r| shutter_integrand(x, t, r, self.k, d, &self.c).unwrap_or(f64::NAN), w[0], w[1])
                .map_err(|e| match e {
                    Error::Convergence { what, partial } => Error::Convergence {
                        what: format!("shutter density at x = {x}, t = {t}: {what}"),
                        partial: crate::numerics::QuadratureResult {
                            value: mass / (2.0 * PI * hbar * t) * (total + partial.value),
                            error_estimate: mass / (2.0 * PI * hbar * t) * (error + partial.error_estimate),
                            evaluations: evaluations + partial.evaluations,
                        },
                    },
                    other => other,
                })?;
            total += res.value;
            error += res.error_estimate;
            evaluations += res.evaluations;
        }
        Ok(mass / (2.0 * PI * hbar * t) * total)
    }
}

/// `f(x, t, R')` of the beam integral.
pub fn shutter_integrand(x: f64, t: f64, r: f64, k: f64, d: f64, c: &ModelConstants) -> Result<f64> {
    if !(t > 0.0) || d < 0.0 {
        return Err(Error::domain("shutter integrand needs t > 0 and D >= 0"));
    }
    let ModelConstants { hbar, mass, .. } = *c;
    let u = hbar * k * t + mass * (r - x);
    if d == 0.0 {
        let b = u / (hbar * t);
        let arg = 2.0 * r * b;
        if arg.abs() < 1e-4 {
            // -2 sin(2 r b)/b = -4 r (1 - arg^2/6 + arg^4/120)
            let a2 = arg * arg;
            return Ok(-4.0 * r * (1.0 - a2 / 6.0 + a2 * a2 / 120.0));
        }
        return Ok(-2.0 * arg.sin() / b);
    }
    let a = d * t / (3.0 * hbar * hbar);
    let y = 3f64.sqrt() * u / (2.0 * d.sqrt() * t.powf(1.5));
    let z = Complex64::new(-2.0 * r * a.sqrt(), y);
    Ok(hbar * (3.0 * PI / (d * t)).sqrt() * erf_scaled(z)?.re)
}

/// Zero-temperature beam density `(C + 1/2)^2/2 + (S + 1/2)^2/2` at
/// `xi = sqrt(m / (pi hbar t)) (hbar k t / m - x)`.
pub fn shutter_density_zero_t(x: f64, t: f64, k: f64, c: &ModelConstants) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("shutter density needs t > 0, got {t}")));
    }
    let ModelConstants { hbar, mass, .. } = *c;
    let xi = (mass / (PI * hbar * t)).sqrt() * (hbar * k * t / mass - x);
    let (cf, sf) = fresnel(xi)?;
    Ok(0.5 * (cf + 0.5).powi(2) + 0.5 * (sf + 0.5).powi(2))
}
