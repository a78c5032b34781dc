//! Two identical particles built from one-particle pair kernels.
//!
//! For minimum-uncertainty packets `psi` (x0, p0, s0) and `phi` (x0', p0', s0')
//! the evolved cross density `P12(x, t) = rho12(x, x, t)`, with
//! `rho12(x, x', 0) = psi(x) phi*(x')`, is the complex Gaussian
//!
//! ```text
//! P12 = sqrt(2 s0 s0' / S) / (2 sqrt(pi b2)) exp[b0 - (x - b1)^2 / (4 b2)],   S = s0^2 + s0'^2
//! ```
//!
//! One-particle states are finite superpositions of such packets, so every
//! two-particle quantity expands bilinearly over kernels.

use crate::error::{Error, Result};
use crate::gaussian::{tau, thermal_spread};
use crate::model::{Environment, GaussianPacket, ModelConstants};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cross density kernel of two minimum-uncertainty packets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairKernel {
    pub psi: GaussianPacket,
    pub phi: GaussianPacket,
    pub env: Environment,
    pub c: ModelConstants,
}

/// Kernel coefficients and their time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSnapshot {
    /// `sqrt(2 s0 s0'/S) e^{b0} / (2 sqrt(pi))`
    pub amplitude: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub b1_rate: Complex64,
    pub b2_rate: Complex64,
}

impl PairSnapshot {
    pub fn density(&self, x: f64) -> Complex64 {
        let d = x - self.b1;
        self.amplitude / self.b2.sqrt() * (-d * d / (4.0 * self.b2)).exp()
    }

    /// Current kernel `P12 (b1' + (x - b1) b2' / (2 b2))`.
    pub fn current(&self, x: f64) -> Complex64 {
        self.density(x) * (self.b1_rate + (x - self.b1) * self.b2_rate / (2.0 * self.b2))
    }

    /// `int x^k P12 dx` for `k = 0, 1, 2`.
    pub fn moments(&self) -> [Complex64; 3] {
        let m0 = self.amplitude * 2.0 * PI.sqrt();
        [m0, m0 * self.b1, m0 * (self.b1 * self.b1 + 2.0 * self.b2)]
    }
}

impl PairKernel {
    pub fn new(psi: GaussianPacket, phi: GaussianPacket, env: Environment, c: ModelConstants) -> Result<Self> {
        psi.validate()?;
        phi.validate()?;
        env.validate()?;
        c.validate()?;
        if psi.eta != 0.0 || phi.eta != 0.0 {
            return Err(Error::domain("pair kernels require minimum-uncertainty packets (eta = 0)"));
        }
        Ok(Self { psi, phi, env, c })
    }

    fn sum_sq(&self) -> f64 {
        self.psi.sigma0.powi(2) + self.phi.sigma0.powi(2)
    }

    pub fn b0(&self) -> Complex64 {
        let (x0, p0, s0) = (self.psi.x0, self.psi.p0, self.psi.sigma0);
        let (xb, pb, sb) = (self.phi.x0, self.phi.p0, self.phi.sigma0);
        let hbar = self.c.hbar;
        let s = self.sum_sq();
        let (s0, sb) = (s0 * s0, sb * sb);
        let re = hbar * hbar * (x0 - xb).powi(2) + 4.0 * (p0 - pb).powi(2) * s0 * sb;
        let im = -4.0 * hbar * (p0 - pb) * (x0 * sb + xb * s0);
        -Complex64::new(re, im) / (4.0 * hbar * hbar * s)
    }

    pub fn b1(&self, t: f64) -> Complex64 {
        self.at(t).b1
    }

    pub fn b2(&self, t: f64) -> Complex64 {
        self.at(t).b2
    }

    pub fn at(&self, t: f64) -> PairSnapshot {
        let (x0, p0, s0) = (self.psi.x0, self.psi.p0, self.psi.sigma0 * self.psi.sigma0);
        let (xb, pb, sb) = (self.phi.x0, self.phi.p0, self.phi.sigma0 * self.phi.sigma0);
        let ModelConstants { hbar, mass, .. } = self.c;
        let gamma = self.env.gamma;
        let d = self.env.diffusion(&self.c);
        let s = s0 + sb;
        let tau = tau(t, gamma);
        let decay = (-2.0 * gamma * t).exp();

        let b1 = Complex64::new(
            (x0 * sb + xb * s0) / s + (pb * sb + p0 * s0) / (mass * s) * tau,
            -(hbar * tau / (2.0 * mass) * (x0 - xb) / s + 2.0 * (pb - p0) * s0 * sb / (hbar * s)),
        );
        let b1_rate = Complex64::new(
            (pb * sb + p0 * s0) / (mass * s) * decay,
            -hbar * decay / (2.0 * mass) * (x0 - xb) / s,
        );
        let b2 = Complex64::new(
            s0 * sb / s + hbar * hbar * tau * tau / (4.0 * mass * mass * s) + d * thermal_spread(t, gamma) / (2.0 * mass * mass),
            -hbar * (s0 - sb) / (2.0 * mass * s) * tau,
        );
        let b2_rate = Complex64::new(
            hbar * hbar * tau * decay / (2.0 * mass * mass * s) + d * tau * tau / (mass * mass),
            -hbar * (s0 - sb) / (2.0 * mass * s) * decay,
        );
        let pref = (2.0 * self.psi.sigma0 * self.phi.sigma0 / s).sqrt() / (2.0 * PI.sqrt());
        PairSnapshot {
            amplitude: pref * self.b0().exp(),
            b1,
            b2,
            b1_rate,
            b2_rate,
        }
    }

    pub fn density(&self, x: f64, t: f64) -> Complex64 {
        self.at(t).density(x)
    }

    pub fn current(&self, x: f64, t: f64) -> Complex64 {
        self.at(t).current(x)
    }

    /// `int P12 dx = int psi phi* dx`, independent of time and environment.
    pub fn overlap(&self) -> Complex64 {
        (2.0 * self.psi.sigma0 * self.phi.sigma0 / self.sum_sq()).sqrt() * self.b0().exp()
    }

    /// Indistinguishability decoherence function; only defined for the
    /// one-slit configuration (equal widths and centers).
    pub fn gamma12(&self, t: f64) -> Result<f64> {
        if self.psi.sigma0 != self.phi.sigma0 || self.psi.x0 != self.phi.x0 {
            return Err(Error::domain(
                "gamma12 closed form needs equal widths and equal centers for the two packets",
            ));
        }
        let s2 = self.psi.sigma0 * self.psi.sigma0;
        let ModelConstants { hbar, mass, .. } = self.c;
        let dp = self.psi.p0 - self.phi.p0;
        if dp == 0.0 {
            return Ok(0.0);
        }
        let d = self.env.diffusion(&self.c);
        let tau = tau(t, self.env.gamma);
        let k = thermal_spread(t, self.env.gamma);
        // 1 - (s0^2/s_t^2)[1 + hbar^2 tau^2/(4 m^2 s0^4)] = (D K / m^2) / s_t^2
        let spread = s2 * (1.0 + hbar * hbar * tau * tau / (4.0 * mass * mass * s2 * s2));
        let thermal = d * k / (mass * mass);
        Ok(-s2 * dp * dp / (2.0 * hbar * hbar) * thermal / (spread + thermal))
    }
}

/// Finite superposition of minimum-uncertainty packets, normalized on
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    pub terms: Vec<(Complex64, GaussianPacket)>,
}

/// `int g h* dx` for two minimum-uncertainty packets.
pub fn packet_overlap(g: &GaussianPacket, h: &GaussianPacket, c: &ModelConstants) -> Result<Complex64> {
    Ok(PairKernel::new(*g, *h, Environment::closed(), *c)?.overlap())
}

impl Superposition {
    pub fn new(terms: Vec<(Complex64, GaussianPacket)>, c: &ModelConstants) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("a superposition needs at least one packet"));
        }
        let mut norm = 0.0;
        for (ci, gi) in &terms {
            for (ck, gk) in &terms {
                norm += (ci * ck.conj() * packet_overlap(gi, gk, c)?).re;
            }
        }
        if !(norm > 0.0) {
            return Err(Error::domain("superposition has zero norm"));
        }
        let scale = 1.0 / norm.sqrt();
        Ok(Self {
            terms: terms.into_iter().map(|(ci, g)| (ci * scale, g)).collect(),
        })
    }

    pub fn single(packet: GaussianPacket, c: &ModelConstants) -> Result<Self> {
        Self::new(vec![(Complex64::new(1.0, 0.0), packet)], c)
    }

    /// Equal-weight superposition of motionless packets at `-x0` and `+x0`.
    pub fn cat(x0: f64, sigma0: f64, c: &ModelConstants) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new(
            vec![
                (one, GaussianPacket::minimum(-x0, 0.0, sigma0)?),
                (one, GaussianPacket::minimum(x0, 0.0, sigma0)?),
            ],
            c,
        )
    }

    /// `<other|self>`.
    pub fn overlap_with(&self, other: &Superposition, c: &ModelConstants) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (ci, gi) in &self.terms {
            for (dk, hk) in &other.terms {
                s += ci * dk.conj() * packet_overlap(gi, hk, c)?;
            }
        }
        Ok(s)
    }
}

/// Weighted sum of pair kernels representing one `P_ij(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossDensity {
    terms: Vec<(Complex64, PairKernel)>,
}

/// A `CrossDensity` with all kernels evaluated at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSnapshot {
    terms: Vec<(Complex64, PairSnapshot)>,
}

impl CrossDensity {
    pub fn new(left: &Superposition, right: &Superposition, env: Environment, c: ModelConstants) -> Result<Self> {
        let mut terms = Vec::with_capacity(left.terms.len() * right.terms.len());
        for (ci, gi) in &left.terms {
            for (dk, hk) in &right.terms {
                terms.push((ci * dk.conj(), PairKernel::new(*gi, *hk, env, c)?));
            }
        }
        Ok(Self { terms })
    }

    pub fn at(&self, t: f64) -> CrossSnapshot {
        CrossSnapshot {
            terms: self.terms.iter().map(|(w, k)| (*w, k.at(t))).collect(),
        }
    }

    pub fn overlap(&self) -> Complex64 {
        self.terms.iter().map(|(w, k)| w * k.overlap()).sum()
    }
}

impl CrossSnapshot {
    pub fn density(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(w, k)| w * k.density(x)).sum()
    }

    pub fn current(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(w, k)| w * k.current(x)).sum()
    }

    pub fn moments(&self) -> [Complex64; 3] {
        let mut m = [Complex64::new(0.0, 0.0); 3];
        for (w, k) in &self.terms {
            for (acc, v) in m.iter_mut().zip(k.moments()) {
                *acc += w * v;
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    Boson,
    Fermion,
    MaxwellBoltzmann,
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [Statistics::Boson, Statistics::Fermion, Statistics::MaxwellBoltzmann];

    pub fn name(&self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::MaxwellBoltzmann => "maxwell-boltzmann",
        }
    }

    fn sign(&self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
            Statistics::MaxwellBoltzmann => 0.0,
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boson" | "bosons" | "b" => Ok(Statistics::Boson),
            "fermion" | "fermions" | "f" => Ok(Statistics::Fermion),
            "maxwell-boltzmann" | "mb" | "distinguishable" => Ok(Statistics::MaxwellBoltzmann),
            other => Err(Error::scenario(format!("unknown statistics '{other}'"))),
        }
    }
}

/// Two-particle state built from one-particle states `psi` and `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    pub statistics: Statistics,
    pub env: Environment,
    pub c: ModelConstants,
    p11: CrossDensity,
    p22: CrossDensity,
    p12: CrossDensity,
    /// `s = int P21 dx = <psi|phi>`.
    overlap: Complex64,
    norm_sq: f64,
}

/// All one-particle kernels of a two-particle state at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleSnapshot {
    p11: CrossSnapshot,
    p22: CrossSnapshot,
    p12: CrossSnapshot,
    sign: f64,
    overlap: Complex64,
    norm_sq: f64,
}

impl TwoParticleState {
    pub fn new(
        psi: &Superposition,
        phi: &Superposition,
        statistics: Statistics,
        env: Environment,
        c: ModelConstants,
    ) -> Result<Self> {
        let p11 = CrossDensity::new(psi, psi, env, c)?;
        let p22 = CrossDensity::new(phi, phi, env, c)?;
        let p12 = CrossDensity::new(psi, phi, env, c)?;
        let overlap = p12.overlap().conj();
        let sign = statistics.sign();
        let den = 2.0 * (1.0 + sign * overlap.norm_sqr());
        if !(den > 1e-14) {
            return Err(Error::domain("fermionic state of identical one-particle states vanishes"));
        }
        let norm_sq = if statistics == Statistics::MaxwellBoltzmann { 0.5 } else { 1.0 / den };
        Ok(Self {
            statistics,
            env,
            c,
            p11,
            p22,
            p12,
            overlap,
            norm_sq,
        })
    }

    /// `s = int P21(x, t) dx`.
    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }

    /// `N^2`; `1/2` for distinguishable particles.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn at(&self, t: f64) -> TwoParticleSnapshot {
        TwoParticleSnapshot {
            p11: self.p11.at(t),
            p22: self.p22.at(t),
            p12: self.p12.at(t),
            sign: self.statistics.sign(),
            overlap: self.overlap,
            norm_sq: self.norm_sq,
        }
    }

    pub fn joint_density(&self, x1: f64, x2: f64, t: f64) -> f64 {
        self.at(t).joint_density(x1, x2)
    }

    pub fn single_particle_density(&self, x: f64, t: f64) -> f64 {
        self.at(t).single_particle_density(x)
    }

    pub fn single_particle_current(&self, x: f64, t: f64) -> f64 {
        self.at(t).single_particle_current(x)
    }

    /// `P12(x, t)` of the one-particle states.
    pub fn cross_density(&self, x: f64, t: f64) -> Complex64 {
        self.p12.at(t).density(x)
    }

    /// `int P21(x, t) dx` from the kernel moments at time `t`.
    pub fn overlap_at(&self, t: f64) -> Complex64 {
        self.p12.at(t).moments()[0].conj()
    }

    /// Continuity check `dP_sp/dt + dJ_sp/dx` by central differences.
    pub fn continuity_residual(&self, x: f64, t: f64, h: f64) -> ContinuityResidual {
        let now = self.at(t);
        let dt = (self.at(t + h).single_particle_density(x) - self.at(t - h).single_particle_density(x)) / (2.0 * h);
        let dx = (now.single_particle_current(x + h) - now.single_particle_current(x - h)) / (2.0 * h);
        ContinuityResidual {
            residual: (dt + dx).abs(),
            time_derivative: dt,
            flux_divergence: dx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityResidual {
    pub residual: f64,
    pub time_derivative: f64,
    pub flux_divergence: f64,
}

impl ContinuityResidual {
    pub fn relative(&self) -> f64 {
        let scale = self.time_derivative.abs().max(self.flux_divergence.abs());
        if scale == 0.0 {
            self.residual
        } else {
            self.residual / scale
        }
    }
}

impl TwoParticleSnapshot {
    pub fn joint_density(&self, x1: f64, x2: f64) -> f64 {
        let a1 = self.p11.density(x1).re;
        let a2 = self.p11.density(x2).re;
        let b1 = self.p22.density(x1).re;
        let b2 = self.p22.density(x2).re;
        let direct = a1 * b2 + b1 * a2;
        if self.sign == 0.0 {
            return self.norm_sq * direct;
        }
        let exchange = 2.0 * (self.p12.density(x1) * self.p12.density(x2).conj()).re;
        self.norm_sq * (direct + self.sign * exchange)
    }

    pub fn single_particle_density(&self, x: f64) -> f64 {
        let direct = self.p11.density(x).re + self.p22.density(x).re;
        if self.sign == 0.0 {
            return self.norm_sq * direct;
        }
        self.norm_sq * (direct + self.sign * 2.0 * (self.p12.density(x) * self.overlap).re)
    }

    pub fn single_particle_current(&self, x: f64) -> f64 {
        let direct = self.p11.current(x).re + self.p22.current(x).re;
        if self.sign == 0.0 {
            return self.norm_sq * direct;
        }
        self.norm_sq * (direct + self.sign * 2.0 * (self.p12.current(x) * self.overlap).re)
    }

    /// `sqrt(<(x1 - x2)^2>)` under the joint density, from kernel moments.
    pub fn joint_width(&self) -> f64 {
        let m11 = self.p11.moments();
        let m22 = self.p22.moments();
        let m12 = self.p12.moments();
        let pair = |a: &[Complex64; 3], b: &[Complex64; 3]| a[2] * b[0] + a[0] * b[2] - 2.0 * a[1] * b[1];
        let direct = 2.0 * pair(&m11, &m22).re;
        let m21 = [m12[0].conj(), m12[1].conj(), m12[2].conj()];
        let exchange = 2.0 * pair(&m12, &m21).re;
        (self.norm_sq * (direct + self.sign * exchange)).sqrt()
    }

    /// `int int P dx1 dx2` from kernel moments.
    pub fn total_probability(&self) -> f64 {
        let a = self.p11.moments()[0].re;
        let b = self.p22.moments()[0].re;
        let s = self.p12.moments()[0];
        self.norm_sq * (2.0 * a * b + self.sign * 2.0 * s.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> ModelConstants {
        ModelConstants::default()
    }

    fn kernel(psi: (f64, f64, f64), phi: (f64, f64, f64), gamma: f64, kt: f64) -> PairKernel {
        PairKernel::new(
            GaussianPacket::minimum(psi.0, psi.1, psi.2).unwrap(),
            GaussianPacket::minimum(phi.0, phi.1, phi.2).unwrap(),
            Environment::new(gamma, kt).unwrap(),
            c(),
        )
        .unwrap()
    }

    #[test]
    fn identical_packets_reduce_to_diagonal() {
        let k = kernel((1.0, 0.5, 0.8), (1.0, 0.5, 0.8), 0.2, 3.0);
        let e = crate::gaussian::EvolvedGaussian::new(k.psi, k.env, k.c).unwrap();
        for &(x, t) in &[(0.3, 0.0), (1.7, 1.2), (-2.0, 4.0)] {
            let p = k.density(x, t);
            assert!((p.re - e.probability_density(x, t)).abs() < 1e-15);
            assert!(p.im.abs() < 1e-16);
            let j = k.current(x, t);
            assert!((j.re - e.probability_current(x, t)).abs() < 1e-14);
        }
        assert!((k.overlap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn equal_widths_give_real_b2() {
        let k = kernel((1.0, 0.5, 0.8), (-2.0, -1.0, 0.8), 0.2, 3.0);
        let e = crate::gaussian::EvolvedGaussian::new(k.psi, k.env, k.c).unwrap();
        let b2 = k.b2(2.5);
        assert_eq!(b2.im, 0.0);
        assert!((b2.re - e.at(2.5).width_sq / 2.0).abs() < 1e-14);
    }

    #[test]
    fn widely_separated_overlap_is_tiny() {
        let k = kernel((0.0, 0.0, 1.0), (10.0, 0.0, 1.0), 0.0, 0.0);
        assert!(k.overlap().norm() < 4e-6);
    }

    #[test]
    fn gamma12_rules() {
        let k = kernel((0.0, 1.0, 1.0), (0.0, 1.0, 1.0), 0.1, 2.0);
        assert_eq!(k.gamma12(3.0).unwrap(), 0.0);
        let k = kernel((0.0, 1.0, 1.0), (0.0, 0.0, 1.0), 0.1, 2.0);
        assert_eq!(k.gamma12(0.0).unwrap(), 0.0);
        assert!((k.gamma12(1e4).unwrap() + 0.5).abs() < 1e-3);
        assert!(kernel((1.0, 1.0, 1.0), (0.0, 0.0, 1.0), 0.1, 2.0).gamma12(1.0).is_err());
    }

    #[test]
    fn statistics_parse() {
        assert_eq!("fermion".parse::<Statistics>().unwrap(), Statistics::Fermion);
        assert_eq!("MB".parse::<Statistics>().unwrap(), Statistics::MaxwellBoltzmann);
        assert!("anyon".parse::<Statistics>().is_err());
    }

    #[test]
    fn moments_normalize_joint_density() {
        let psi = Superposition::cat(5.0, 1.0, &c()).unwrap();
        let phi = Superposition::cat(5.0, 0.5, &c()).unwrap();
        for stats in Statistics::ALL {
            let st = TwoParticleState::new(&psi, &phi, stats, Environment::new(0.2, 10.0).unwrap(), c()).unwrap();
            for &t in &[0.0, 1.0, 3.0] {
                assert!((st.at(t).total_probability() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fermions_of_one_state_rejected() {
        let psi = Superposition::single(GaussianPacket::minimum(0.0, 0.0, 1.0).unwrap(), &c()).unwrap();
        assert!(TwoParticleState::new(&psi, &psi, Statistics::Fermion, Environment::closed(), c()).is_err());
    }
}
