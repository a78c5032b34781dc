//! Quick invariant suite behind the `selftest` command.

use crate::cat::CatState;
use crate::gaussian::EvolvedGaussian;
use crate::identical::{PairKernel, Statistics, Superposition, TwoParticleState};
use crate::model::{diffusion_coefficient, Environment, GaussianPacket, ModelConstants};
use crate::numerics::{erf_complex, fresnel, residual_cl_terms};
use crate::shutter::{shutter_density_zero_t, ShutterConfig};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        passed: value <= limit,
        detail: format!("{value:.3e} <= {limit:.0e}"),
    }
}

fn failed(name: &'static str, e: impl std::fmt::Display) -> Check {
    Check {
        name,
        passed: false,
        detail: e.to_string(),
    }
}

macro_rules! attempt {
    ($name:expr, $body:expr) => {
        match (|| -> crate::Result<Check> { $body })() {
            Ok(c) => c,
            Err(e) => failed($name, e),
        }
    };
}

pub fn run_selftest() -> Vec<Check> {
    let c = ModelConstants::default();
    let mut out = Vec::new();

    out.push(attempt!("diffusion coefficient", {
        let d = diffusion_coefficient(&Environment::new(0.2, 10.0)?, &c)?;
        Ok(check("diffusion coefficient", (d - 4.0).abs(), 0.0))
    }));

    out.push(attempt!("complex error function", {
        let a = erf_complex(Complex64::new(1.0, 0.0))?.re - 0.842_700_792_949_714_9;
        let b = erf_complex(Complex64::new(0.0, 1.0))?.im - 1.650_425_758_797_542_9;
        Ok(check("complex error function", a.abs().max(b.abs()), 1e-13))
    }));

    out.push(attempt!("fresnel integrals", {
        let (c0, s0) = fresnel(0.0)?;
        let (c1, s1) = fresnel(1.0)?;
        let err = c0.abs().max(s0.abs()).max((c1 - 0.779_893_400_376_822_8).abs()).max((s1 - 0.438_259_147_390_354_8).abs());
        Ok(check("fresnel integrals", err, 1e-12))
    }));

    out.push(attempt!("master equation residual", {
        let mut worst: f64 = 0.0;
        for (env, packet, g) in [
            (Environment::new(0.3, 7.0)?, GaussianPacket::new(-1.0, 0.7, 1.2, 1.5)?, 0.0),
            (Environment::new(0.1, 2.0)?, GaussianPacket::new(0.5, -0.3, 0.8, -0.5)?, 1.0),
        ] {
            let c = c.with_g(g);
            let e = EvolvedGaussian::new(packet, env, c)?;
            for &(x, xp, t) in &[(0.3, -0.4, 0.7), (-1.0, 0.2, 2.0), (1.5, 1.0, 4.0)] {
                let r = residual_cl_terms(|a, b, tt| e.density_matrix_xx(a, b, tt), (x, xp, t), 1e-3, &env, &c);
                worst = worst.max(r.relative());
            }
        }
        Ok(check("master equation residual", worst, 1e-5))
    }));

    out.push(attempt!("decoherence limits", {
        let p = GaussianPacket::minimum(5.0, -2.0, 1.0)?;
        let closed = CatState::symmetric(p, Environment::new(0.05, 0.0)?, c)?;
        let open = CatState::symmetric(p, Environment::new(0.05, 1.0)?, c)?;
        let exact = (0..20).map(|i| closed.gamma_min(i as f64).abs()).fold(0.0, f64::max) + open.gamma_min(0.0).abs();
        let late = (open.gamma_min(1e6 / 0.05) + 20.5).abs();
        Ok(Check {
            name: "decoherence limits",
            passed: exact == 0.0 && late < 1e-3,
            detail: format!("closed/initial {exact:.1e}, stationary offset {late:.3e}"),
        })
    }));

    out.push(attempt!("cat cross term vs pair kernel", {
        let env = Environment::new(0.02, 3.0)?;
        let p = GaussianPacket::minimum(3.0, -1.0, 1.0)?;
        let cat = CatState::symmetric(p, env, c)?;
        let kernel = PairKernel::new(p, p.mirrored(), env, c)?;
        let mut worst: f64 = 0.0;
        for &t in &[0.5, 2.0] {
            let snap = cat.snapshot(t);
            for i in 0..41 {
                let x = -10.0 + 0.5 * i as f64;
                worst = worst.max((snap.cross_term(x) - 2.0 * kernel.density(x, t).re).abs());
            }
        }
        Ok(check("cat cross term vs pair kernel", worst, 1e-9))
    }));

    out.push(attempt!("two-particle normalization", {
        let psi = Superposition::cat(5.0, 1.0, &c)?;
        let phi = Superposition::cat(5.0, 0.5, &c)?;
        let mut worst: f64 = 0.0;
        for st in Statistics::ALL {
            let state = TwoParticleState::new(&psi, &phi, st, Environment::new(0.4, 10.0)?, c)?;
            for &t in &[0.0, 0.5, 2.0] {
                worst = worst.max((state.at(t).total_probability() - 1.0).abs());
                worst = worst.max((state.overlap_at(t) - state.overlap()).norm());
            }
        }
        Ok(check("two-particle normalization", worst, 1e-7))
    }));

    out.push(attempt!("shutter limits", {
        let front = (shutter_density_zero_t(5.0, 5.0, 1.0, &c)? - 0.25).abs();
        let cfg = ShutterConfig::new(1.0, Environment::new(1e-4, 5e-5)?, c)?;
        let cold = (cfg.density(8.0, 12.0)? - shutter_density_zero_t(8.0, 12.0, 1.0, &c)?).abs();
        Ok(Check {
            name: "shutter limits",
            passed: front == 0.0 && cold < 1e-3,
            detail: format!("front {front:.1e}, weak-coupling offset {cold:.3e}"),
        })
    }));

    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for c in super::run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
