//! Symmetric superposition of two Gaussian packets (`+x0, +p0` and
//! `-x0, -p0`, same width and stretching).
//!
//! The density is written in interference form
//!
//! ```text
//! P = N^2 (Paa + Pbb + 2 sqrt(Paa Pbb) e^Gamma cos Theta),   Theta = beta (x - alpha) / w^2
//! ```
//!
//! with closed forms for `Gamma`, `beta` and `alpha`.

use crate::error::{Error, Result};
use crate::gaussian::{tau, EvolvedGaussian, Kinematics};
use crate::model::{Environment, GaussianPacket, ModelConstants};
use crate::numerics::{erf_scaled, Quadrature};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Step of the time stencil used for `d/dt` of cumulative quantities.
pub const TIME_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatState {
    pub packet_a: GaussianPacket,
    pub packet_b: GaussianPacket,
    pub env: Environment,
    pub c: ModelConstants,
    a: EvolvedGaussian,
    b: EvolvedGaussian,
    norm: f64,
}

/// Everything needed to evaluate the cat at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSnapshot {
    pub a: Kinematics,
    pub b: Kinematics,
    pub gamma: f64,
    pub beta: f64,
    pub alpha: f64,
    pub norm_sq: f64,
}

impl CatSnapshot {
    pub fn theta(&self, x: f64) -> f64 {
        self.beta * (x - self.alpha) / self.a.width_sq
    }

    /// `2 sqrt(Paa Pbb) e^Gamma cos Theta`, without the normalization.
    pub fn cross_term(&self, x: f64) -> f64 {
        2.0 * (self.a.density(x) * self.b.density(x)).sqrt() * self.gamma.exp() * self.theta(x).cos()
    }

    pub fn density(&self, x: f64) -> f64 {
        self.norm_sq * (self.a.density(x) + self.b.density(x) + self.cross_term(x))
    }

    /// `int_{-inf}^x cross_term`, in closed form through the complex error
    /// function.
    pub fn cross_cumulative(&self, x: f64) -> f64 {
        let w2 = self.a.width_sq;
        let w = w2.sqrt();
        let mid = 0.5 * (self.a.center + self.b.center);
        let half = 0.5 * (self.a.center - self.b.center);
        let kappa = self.beta / (std::f64::consts::SQRT_2 * w);
        let u = (x - mid) / (std::f64::consts::SQRT_2 * w);
        let z = Complex64::new(u, -kappa);
        // e^{-kappa^2} (1 + erf(u - i kappa)); erf_scaled cannot fail on finite input
        let tail = Complex64::new((-kappa * kappa).exp(), 0.0) + erf_scaled(z).unwrap_or_default();
        let phase = Complex64::from_polar(1.0, self.beta * (mid - self.alpha) / w2);
        (self.gamma - half * half / (2.0 * w2)).exp() * (phase * tail).re
    }
}

/// Sampled decoherence quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceCurve {
    pub times: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub attenuation: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl CatState {
    /// Cat built from the `+x0, +p0` branch and its mirror image.
    pub fn symmetric(packet: GaussianPacket, env: Environment, c: ModelConstants) -> Result<Self> {
        Self::from_packets(packet, packet.mirrored(), env, c)
    }

    /// Rejects pairs that are not mirror images, and stretched pairs under
    /// a nonzero force, for which no closed form is available.
    pub fn from_packets(a: GaussianPacket, b: GaussianPacket, env: Environment, c: ModelConstants) -> Result<Self> {
        a.validate()?;
        b.validate()?;
        if b != a.mirrored() {
            return Err(Error::domain("cat branches must be mirror images (x0, p0) and (-x0, -p0)"));
        }
        if a.eta != 0.0 && c.g != 0.0 {
            return Err(Error::domain("stretched cat states are only supported with g = 0"));
        }
        let ea = EvolvedGaussian::new(a, env, c)?;
        let eb = EvolvedGaussian::new(b, env, c)?;
        let GaussianPacket { x0, p0, sigma0, eta } = a;
        let hbar = c.hbar;
        let s2 = sigma0 * sigma0;
        let overlap =
            (-x0 * x0 / (2.0 * s2) + 2.0 * p0 * x0 * eta / hbar - 2.0 * p0 * p0 * (1.0 + eta * eta) * s2 / (hbar * hbar)).exp();
        Ok(Self {
            packet_a: a,
            packet_b: b,
            env,
            c,
            a: ea,
            b: eb,
            norm: 1.0 / (2.0 + 2.0 * overlap).sqrt(),
        })
    }

    pub fn with_environment(&self, env: Environment) -> Result<Self> {
        Self::from_packets(self.packet_a, self.packet_b, env, self.c)
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn branches(&self) -> (&EvolvedGaussian, &EvolvedGaussian) {
        (&self.a, &self.b)
    }

    fn overlap_exponent(&self) -> f64 {
        let GaussianPacket { x0, p0, sigma0, .. } = self.packet_a;
        let hbar = self.c.hbar;
        x0 * x0 / (2.0 * sigma0 * sigma0) + 2.0 * p0 * p0 * sigma0 * sigma0 / (hbar * hbar)
    }

    /// `w^2 - s0^2 [1 + hbar^2 tau^2/(4 m^2 s0^4)]`: the part of the squared
    /// width not produced by free spreading. Zero exactly when `D = 0`, `eta = 0`.
    fn excess_width_sq(&self, t: f64, eta: f64) -> f64 {
        let GaussianPacket { sigma0, .. } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let s2 = sigma0 * sigma0;
        let tau = tau(t, self.env.gamma);
        let d = self.env.diffusion(&self.c);
        s2 * (eta * hbar * tau / (mass * s2) + eta * eta)
            + d * crate::gaussian::thermal_spread(t, self.env.gamma) / (mass * mass)
    }

    /// `-(x0^2/2s0^2 + 2 p0^2 s0^2/hbar^2)(1 - (s0^2/w^2)[1 + hbar^2 tau^2/(4 m^2 s0^4)])`
    fn gamma_base(&self, t: f64, eta: f64) -> f64 {
        let mut p = self.packet_a;
        p.eta = eta;
        let w2 = EvolvedGaussian { packet: p, env: self.env, c: self.c }.at(t).width_sq;
        -self.overlap_exponent() * self.excess_width_sq(t, eta) / w2
    }

    /// Decoherence function of the minimum-uncertainty pair (ignores `eta`).
    pub fn gamma_min(&self, t: f64) -> f64 {
        self.gamma_base(t, 0.0)
    }

    /// Decoherence function of the stretched pair in free space.
    pub fn gamma_stretched(&self, t: f64) -> f64 {
        let GaussianPacket { x0, p0, sigma0, eta } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let k = self.a.at(t);
        let tau = k.tau;
        let w2 = k.width_sq;
        let base = self.gamma_base(t, eta);
        if eta == 0.0 {
            return base;
        }
        // written for the branch momentum of opposite sign
        let p = -p0;
        let s2 = sigma0 * sigma0;
        let mx = mass * x0 + p * tau;
        let f = hbar.powi(3) * x0 * mx * tau
            + eta * hbar * hbar * (mass * mass * x0 * x0 + 4.0 * mass * x0 * p * tau + p * p * tau * tau) * s2
            + 4.0 * (1.0 + eta * eta) * hbar * mass * p * mx * s2 * s2
            + 4.0 * eta * (2.0 + eta * eta) * mass * mass * p * p * s2 * s2 * s2;
        base + eta * (-2.0 * p * (hbar * x0 + eta * p * s2) / (hbar * hbar) + f / (2.0 * hbar * hbar * mass * mass * s2 * w2))
    }

    /// Decoherence function for motionless branches (`p0 = 0`), any `eta`.
    pub fn gamma_motionless(&self, t: f64) -> f64 {
        let GaussianPacket { x0, sigma0, eta, .. } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let k = self.a.at(t);
        let s2 = sigma0 * sigma0;
        let w2 = k.width_sq;
        let spread = 1.0 + hbar * hbar * k.tau * k.tau / (4.0 * mass * mass * s2 * s2);
        -x0 * x0 / (2.0 * s2) * (1.0 - s2 / w2 * spread)
            + x0 * x0 / (2.0 * w2) * (eta * eta + eta * hbar * k.tau / (mass * s2))
    }

    /// Small `gamma t` approximation of the decoherence function.
    pub fn gamma_zero_dissipation(&self, t: f64) -> f64 {
        let GaussianPacket { x0, sigma0, eta, .. } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let d = self.env.diffusion(&self.c);
        let s2 = sigma0 * sigma0;
        let den = 12.0 * mass * mass * s2 * s2 * (1.0 + eta * eta)
            + 12.0 * mass * hbar * eta * s2 * t
            + 3.0 * hbar * hbar * t * t
            + 8.0 * d * s2 * t * t * t;
        -4.0 * d * x0 * x0 * t * t * t / den
    }

    /// Decoherence function used for the density: the stretched form, which
    /// is the minimum-uncertainty form when `eta = 0`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.gamma_stretched(t)
    }

    pub fn attenuation(&self, t: f64) -> f64 {
        self.gamma(t).exp()
    }

    /// Pattern shift under the constant force.
    pub fn alpha(&self, t: f64) -> f64 {
        -self.c.g * crate::gaussian::drift_integral(t, self.env.gamma)
    }

    /// Phase slope of the minimum-uncertainty pair.
    pub fn beta_min(&self, t: f64) -> f64 {
        let GaussianPacket { x0, p0, sigma0, .. } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let s2 = sigma0 * sigma0;
        -x0 * hbar * tau(t, self.env.gamma) / (2.0 * mass * s2) + 2.0 * p0 * s2 / hbar
    }

    pub fn beta(&self, t: f64) -> f64 {
        let GaussianPacket { x0, p0, sigma0, eta } = self.packet_a;
        let ModelConstants { hbar, mass, .. } = self.c;
        let s2 = sigma0 * sigma0;
        let tau = tau(t, self.env.gamma);
        self.beta_min(t) - (x0 - p0 * tau / mass) * eta + 2.0 * p0 * s2 * eta * eta / hbar
    }

    pub fn snapshot(&self, t: f64) -> CatSnapshot {
        CatSnapshot {
            a: self.a.at(t),
            b: self.b.at(t),
            gamma: self.gamma(t),
            beta: self.beta(t),
            alpha: self.alpha(t),
            norm_sq: self.norm * self.norm,
        }
    }

    pub fn theta(&self, x: f64, t: f64) -> f64 {
        self.snapshot(t).theta(x)
    }

    pub fn density(&self, x: f64, t: f64) -> f64 {
        self.snapshot(t).density(x)
    }

    /// Distance between adjacent interference maxima.
    pub fn fringe_spacing(&self, t: f64) -> f64 {
        let s = self.snapshot(t);
        2.0 * std::f64::consts::PI * s.a.width_sq / s.beta.abs()
    }

    pub fn decoherence_curve(&self, times: &[f64]) -> DecoherenceCurve {
        let gamma_values: Vec<f64> = times.iter().map(|&t| self.gamma(t)).collect();
        DecoherenceCurve {
            times: times.to_vec(),
            attenuation: gamma_values.iter().map(|g| g.exp()).collect(),
            gamma_values,
            beta: times.iter().map(|&t| self.beta(t)).collect(),
            alpha: times.iter().map(|&t| self.alpha(t)).collect(),
        }
    }

    /// `d/dt` of `h(t)` by a fourth-order stencil; one-sided near `t = 0`.
    fn time_derivative<F: Fn(f64) -> f64>(h: F, t: f64) -> f64 {
        let d = TIME_STEP;
        if t < 2.0 * d {
            (-25.0 * h(t) + 48.0 * h(t + d) - 36.0 * h(t + 2.0 * d) + 16.0 * h(t + 3.0 * d) - 3.0 * h(t + 4.0 * d))
                / (12.0 * d)
        } else {
            (-h(t + 2.0 * d) + 8.0 * h(t + d) - 8.0 * h(t - d) + h(t - 2.0 * d)) / (12.0 * d)
        }
    }

    /// Probability current from the branch currents and the time derivative
    /// of the closed-form cumulative cross term.
    pub fn current(&self, x: f64, t: f64) -> f64 {
        let s = self.snapshot(t);
        let dcross = Self::time_derivative(|tt| self.snapshot(tt).cross_cumulative(x), t);
        s.norm_sq * (s.a.current(x) + s.b.current(x) - dcross)
    }

    /// Probability current as `-int_{-inf}^x dP/dt`, with the time
    /// derivative taken by finite differences of the density.
    pub fn current_numeric(&self, x: f64, t: f64, tol: f64) -> Result<f64> {
        let s = self.snapshot(t);
        let w = s.a.width();
        let lower = s.a.center.min(s.b.center) - 12.0 * w;
        if x <= lower {
            return Ok(0.0);
        }
        let q = Quadrature::new(tol).with_abs_tol(tol * 1e-3);
        // dP/dt at fixed x'; snapshots at the stencil times are shared
        let d = TIME_STEP;
        let offsets: [f64; 5] = if t < 2.0 * d { [0.0, 1.0, 2.0, 3.0, 4.0] } else { [-2.0, -1.0, 0.0, 1.0, 2.0] };
        let weights: [f64; 5] = if t < 2.0 * d {
            [-25.0, 48.0, -36.0, 16.0, -3.0]
        } else {
            [1.0, -8.0, 0.0, 8.0, -1.0]
        };
        let snaps: Vec<CatSnapshot> = offsets.iter().map(|o| self.snapshot(t + o * d)).collect();
        let dpdt = |y: f64| {
            snaps
                .iter()
                .zip(weights.iter())
                .map(|(sn, w)| w * sn.density(y))
                .sum::<f64>()
                / (12.0 * d)
        };
        Ok(-q.integrate(dpdt, lower, x)?.value)
    }

    /// Bohmian velocity `J / P`.
    pub fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        let p = self.density(x, t);
        if !(p >= 1e-300) {
            return Err(Error::Trajectory {
                t,
                x,
                reason: "cat density below 1e-300".into(),
            });
        }
        Ok(self.current(x, t) / p)
    }
}

/// Decoherence time `3 hbar^2 / (2 m gamma kT d^2)` for branch separation `d`;
/// infinite without coupling to the bath.
pub fn decoherence_time(env: &Environment, c: &ModelConstants, separation: f64) -> f64 {
    let den = 2.0 * c.mass * env.gamma * env.kt * separation * separation;
    if den == 0.0 {
        f64::INFINITY
    } else {
        3.0 * c.hbar * c.hbar / den
    }
}
