//! Closed-form evolution of a single (possibly stretched) Gaussian packet
//! under the Caldeira-Leggett equation with the linear potential `V = m g x`.
//!
//! With `s = 2 gamma t`:
//!
//! ```text
//! tau(t) = (1 - e^{-s}) / (2 gamma)
//! x_t    = x0 + p0 tau / m - g t^2 g2(s)
//! w_t^2  = s0^2 [1 + hbar^2 tau^2/(4 m^2 s0^4) + eta hbar tau/(m s0^2) + eta^2] + D K(t) / m^2
//! K(t)   = t^3 g3(s),  K' = 2 tau^2
//! ```
//!
//! `g2` and `g3` are entire functions of `s`, evaluated by power series for
//! small `s` so that the frictionless limit is exact.

use crate::error::{Error, Result};
use crate::model::{Environment, GaussianPacket, ModelConstants};
use num_complex::Complex64;
use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 0.5;

/// `(1 - e^{-2 gamma t}) / (2 gamma)`, equal to `t` at `gamma = 0`.
pub fn tau(t: f64, gamma: f64) -> f64 {
    let s = 2.0 * gamma * t;
    if s == 0.0 {
        return t;
    }
    if s.abs() < 1e-6 {
        return t * (1.0 - s / 2.0 + s * s / 6.0 - s * s * s / 24.0);
    }
    -(-s).exp_m1() / (2.0 * gamma)
}

/// `(s - 1 + e^{-s}) / s^2`.
fn g2(s: f64) -> f64 {
    if s.abs() < SERIES_LIMIT {
        // sum_{n>=2} (-s)^(n-2) / n!
        let mut term: f64 = 0.5;
        let mut sum = term;
        let mut n = 2.0;
        while term.abs() > 1e-17 * sum.abs() {
            n += 1.0;
            term *= -s / n;
            sum += term;
        }
        sum
    } else {
        (s + (-s).exp_m1()) / (s * s)
    }
}

/// `(2s - 3 + 4e^{-s} - e^{-2s}) / s^3`.
fn g3(s: f64) -> f64 {
    if s.abs() < SERIES_LIMIT {
        // sum_{n>=3} (-1)^n (4 - 2^n) s^(n-3) / n!
        let mut sum = 0.0;
        let mut power = 1.0; // s^(n-3) / n!
        let mut fact = 6.0;
        power /= fact;
        let mut n = 3;
        loop {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * (4.0 - 2f64.powi(n)) * power;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() && n > 4 {
                break;
            }
            n += 1;
            fact = n as f64;
            power *= s / fact;
        }
        sum
    } else {
        (2.0 * s + 4.0 * (-s).exp_m1() - (-2.0 * s).exp_m1()) / (s * s * s)
    }
}

/// Thermal spreading integral `K(t) = int_0^t 2 tau(t')^2 dt'`.
pub fn thermal_spread(t: f64, gamma: f64) -> f64 {
    t * t * t * g3(2.0 * gamma * t)
}

/// Displacement `int_0^t tau dt'` produced by unit acceleration.
pub fn drift_integral(t: f64, gamma: f64) -> f64 {
    t * t * g2(2.0 * gamma * t)
}

/// Time-dependent kinematics of one packet, evaluated at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub t: f64,
    pub tau: f64,
    /// `e^{-2 gamma t}`, the derivative of `tau`.
    pub decay: f64,
    pub center: f64,
    pub center_velocity: f64,
    pub width_sq: f64,
    pub width_sq_rate: f64,
}

impl Kinematics {
    pub fn width(&self) -> f64 {
        self.width_sq.sqrt()
    }

    pub fn width_rate(&self) -> f64 {
        0.5 * self.width_sq_rate / self.width()
    }

    pub fn density(&self, x: f64) -> f64 {
        let dx = x - self.center;
        (-dx * dx / (2.0 * self.width_sq)).exp() / (2.0 * PI * self.width_sq).sqrt()
    }

    /// Velocity field `J / P`, affine in `x`.
    pub fn velocity(&self, x: f64) -> f64 {
        self.center_velocity + (x - self.center) * 0.5 * self.width_sq_rate / self.width_sq
    }

    pub fn current(&self, x: f64) -> f64 {
        self.velocity(x) * self.density(x)
    }
}

/// A Gaussian packet together with the environment it evolves in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedGaussian {
    pub packet: GaussianPacket,
    pub env: Environment,
    pub c: ModelConstants,
}

impl EvolvedGaussian {
    pub fn new(packet: GaussianPacket, env: Environment, c: ModelConstants) -> Result<Self> {
        packet.validate()?;
        env.validate()?;
        c.validate()?;
        Ok(Self { packet, env, c })
    }

    pub fn diffusion(&self) -> f64 {
        self.env.diffusion(&self.c)
    }

    pub fn tau(&self, t: f64) -> f64 {
        tau(t, self.env.gamma)
    }

    pub fn at(&self, t: f64) -> Kinematics {
        let GaussianPacket { x0, p0, sigma0, eta } = self.packet;
        let ModelConstants { hbar, mass, g } = self.c;
        let gamma = self.env.gamma;
        let d = self.diffusion();
        let tau = tau(t, gamma);
        let decay = (-2.0 * gamma * t).exp();
        let s2 = sigma0 * sigma0;
        let q = hbar / (mass * s2);
        let width_sq =
            s2 * (1.0 + 0.25 * q * q * tau * tau + eta * q * tau + eta * eta) + d * thermal_spread(t, gamma) / (mass * mass);
        let width_sq_rate = s2 * (0.5 * q * q * tau * decay + eta * q * decay) + 2.0 * d * tau * tau / (mass * mass);
        Kinematics {
            t,
            tau,
            decay,
            center: x0 + p0 * tau / mass - g * drift_integral(t, gamma),
            center_velocity: p0 * decay / mass - g * tau,
            width_sq,
            width_sq_rate,
        }
    }

    pub fn center(&self, t: f64) -> f64 {
        self.at(t).center
    }

    pub fn width(&self, t: f64) -> Result<f64> {
        let w2 = self.at(t).width_sq;
        if w2 > 0.0 && w2.is_finite() {
            Ok(w2.sqrt())
        } else {
            Err(Error::Internal(format!("non-positive squared width {w2} at t = {t}")))
        }
    }

    /// Kernel coefficients `(a0, a1)` of the density matrix at relative
    /// coordinate `r`.
    pub fn kernel(&self, r: f64, t: f64) -> (Complex64, Complex64) {
        let k = self.at(t);
        self.kernel_at(&k, r)
    }

    fn kernel_at(&self, k: &Kinematics, r: f64) -> (Complex64, Complex64) {
        let GaussianPacket { p0, sigma0, eta, .. } = self.packet;
        let ModelConstants { hbar, mass, g } = self.c;
        let d = self.diffusion();
        let s2 = sigma0 * sigma0;
        let e = k.decay;
        // (1 - e^2)/(4 gamma) = tau (1 + e) / 2
        let re0 = -(e * e / (8.0 * s2) + 0.5 * k.tau * (1.0 + e) * d / (hbar * hbar)) * r * r;
        let im0 = (p0 * e - mass * g * k.tau) / hbar * r;
        let im1 = (hbar * e * k.tau / (4.0 * mass * s2) + d * k.tau * k.tau / (mass * hbar) + 0.5 * eta * e) * r;
        (Complex64::new(re0, im0), Complex64::new(k.center, im1))
    }

    /// `rho(R, r, t)` with `R = (x + x')/2`, `r = x - x'`.
    pub fn density_matrix(&self, big_r: f64, r: f64, t: f64) -> Complex64 {
        let k = self.at(t);
        let (a0, a1) = self.kernel_at(&k, r);
        let dr = big_r - a1;
        (a0 - dr * dr / (2.0 * k.width_sq)).exp() / (2.0 * PI * k.width_sq).sqrt()
    }

    /// `rho(x, x', t)`.
    pub fn density_matrix_xx(&self, x: f64, xp: f64, t: f64) -> Complex64 {
        self.density_matrix(0.5 * (x + xp), x - xp, t)
    }

    pub fn probability_density(&self, x: f64, t: f64) -> f64 {
        self.at(t).density(x)
    }

    pub fn probability_current(&self, x: f64, t: f64) -> f64 {
        self.at(t).current(x)
    }

    /// Bohmian velocity `J / P`; fails where the density underflows.
    pub fn bohm_velocity(&self, x: f64, t: f64) -> Result<f64> {
        let k = self.at(t);
        if k.density(x) < 1e-300 {
            return Err(Error::Trajectory {
                t,
                x,
                reason: "density below 1e-300".into(),
            });
        }
        Ok(k.velocity(x))
    }
}
