//! Parameter types shared by every physics module.
//!
//! All types are plain values. `hbar` and `mass` stay symbolic even though
//! every shipped preset sets them to one.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub hbar: f64,
    pub mass: f64,
    /// Acceleration of the linear potential `V(x) = m g x`.
    pub g: f64,
}

impl Default for ModelConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            g: 0.0,
        }
    }
}

impl ModelConstants {
    pub fn new(hbar: f64, mass: f64, g: f64) -> Result<Self> {
        let c = Self { hbar, mass, g };
        c.validate()?;
        Ok(c)
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::domain(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {}", self.mass)));
        }
        if !self.g.is_finite() {
            return Err(Error::domain("g must be finite"));
        }
        Ok(())
    }
}

/// Bath parameters. The diffusion coefficient is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub gamma: f64,
    pub kt: f64,
}

impl Environment {
    pub fn new(gamma: f64, kt: f64) -> Result<Self> {
        let env = Self { gamma, kt };
        env.validate()?;
        Ok(env)
    }

    pub fn closed() -> Self {
        Self { gamma: 0.0, kt: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if !(self.kt >= 0.0 && self.kt.is_finite()) {
            return Err(Error::domain(format!("kT must be >= 0, got {}", self.kt)));
        }
        Ok(())
    }

    /// `D = 2 m gamma kT`.
    pub fn diffusion(&self, c: &ModelConstants) -> f64 {
        2.0 * c.mass * self.gamma * self.kt
    }
}

/// `D = 2 m gamma kT`, rejecting negative bath parameters.
pub fn diffusion_coefficient(env: &Environment, c: &ModelConstants) -> Result<f64> {
    env.validate()?;
    Ok(env.diffusion(c))
}

/// Initial packet
///
/// ```text
/// psi(x) = (2 pi s0^2 (1 + i eta)^2)^(-1/4) exp[-(x - x0)^2 / (4 s0^2 (1 + i eta)) + i p0 x / hbar]
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub x0: f64,
    pub p0: f64,
    pub sigma0: f64,
    pub eta: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, p0: f64, sigma0: f64, eta: f64) -> Result<Self> {
        let p = Self { x0, p0, sigma0, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn minimum(x0: f64, p0: f64, sigma0: f64) -> Result<Self> {
        Self::new(x0, p0, sigma0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::domain(format!("sigma0 must be positive, got {}", self.sigma0)));
        }
        if !(self.x0.is_finite() && self.p0.is_finite() && self.eta.is_finite()) {
            return Err(Error::domain("packet parameters must be finite"));
        }
        Ok(())
    }

    pub fn position_uncertainty(&self) -> f64 {
        self.sigma0 * (1.0 + self.eta * self.eta).sqrt()
    }

    pub fn momentum_uncertainty(&self, c: &ModelConstants) -> f64 {
        c.hbar / (2.0 * self.sigma0)
    }

    pub fn uncertainty_product(&self, c: &ModelConstants) -> f64 {
        self.position_uncertainty() * self.momentum_uncertainty(c)
    }

    /// Mirror image `(-x0, -p0)` with the same width and stretching.
    pub fn mirrored(&self) -> Self {
        Self {
            x0: -self.x0,
            p0: -self.p0,
            ..*self
        }
    }
}

/// Uniform samples `min, ..., max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min >= self.max {
            return Err(Error::domain(format!(
                "grid needs finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::domain("grid needs at least two samples"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}
