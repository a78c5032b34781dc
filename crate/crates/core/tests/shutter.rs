mod common;

use cl_decohere::numerics::erf_scaled;
use cl_decohere::shutter::{shutter_density_zero_t, shutter_integrand, ShutterConfig};
use cl_decohere::{Environment, ModelConstants};
use common::{gauss_legendre, rng};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

fn config(gamma: f64, kt: f64) -> ShutterConfig {
    ShutterConfig::new(1.0, Environment::new(gamma, kt).unwrap(), ModelConstants::default()).unwrap()
}

#[test]
fn front_density_is_one_quarter() {
    let c = ModelConstants::default();
    for &t in &[1.0, 10.0, 37.5] {
        assert_eq!(shutter_density_zero_t(t, t, 1.0, &c).unwrap(), 0.25);
        assert_eq!(config(1e-4, 0.0).density(t, t).unwrap(), 0.25);
    }
}

#[test]
fn zero_temperature_asymptotes() {
    let c = ModelConstants::default();
    // far behind the front the beam is fully transmitted, far ahead it is dark
    assert!((shutter_density_zero_t(-500.0, 20.0, 1.0, &c).unwrap() - 1.0).abs() < 0.05);
    assert!(shutter_density_zero_t(500.0, 20.0, 1.0, &c).unwrap() < 1e-3);
    for i in 0..200 {
        let x = -20.0 + 0.3 * i as f64;
        assert!(shutter_density_zero_t(x, 15.0, 1.0, &c).unwrap() >= 0.0);
    }
}

#[test]
fn weak_diffusion_approaches_fresnel_branch() {
    let c = ModelConstants::default();
    let cfg = config(1e-4, 5e-5);
    assert!((cfg.diffusion() - 1e-8).abs() < 1e-22);
    let mut r = rng(3);
    for _ in 0..8 {
        let x = r.gen_range(0.0..20.0);
        let t = r.gen_range(10.0..50.0);
        let p = cfg.density(x, t).unwrap();
        let q = shutter_density_zero_t(x, t, 1.0, &c).unwrap();
        assert!((p - q).abs() < 1e-3, "x={x} t={t} {p} {q}");
    }
    let p = cfg.density(10.0, 50.0).unwrap();
    assert!((p - shutter_density_zero_t(10.0, 50.0, 1.0, &c).unwrap()).abs() < 1e-3);
}

#[test]
fn zero_diffusion_integrand_limit() {
    let c = ModelConstants::default();
    for &(x, t, r) in &[(5.0f64, 20.0f64, -3.0f64), (12.0, 30.0, -0.5), (0.0, 10.0, -40.0)] {
        let b = (t + (r - x)) / t;
        let want = -2.0 * (2.0 * r * b).sin() / b;
        assert!((shutter_integrand(x, t, r, 1.0, 0.0, &c).unwrap() - want).abs() < 1e-13);
        // tiny D: the erf form tends to the sine form
        let near = shutter_integrand(x, t, r, 1.0, 1e-12, &c).unwrap();
        assert!((near - want).abs() < 1e-3, "{near} {want}");
    }
}

/// Beam density with the integrand written directly and integrated by
/// composite Gauss-Legendre over a fixed window.
fn density_oracle(x: f64, t: f64, d: f64, lower: f64) -> f64 {
    let a = d * t / 3.0;
    let f = |r: f64| {
        let y = 3f64.sqrt() * (t + r - x) / (2.0 * d.sqrt() * t.powf(1.5));
        let z = Complex64::new(-2.0 * r * a.sqrt(), y);
        (3.0 * PI / (d * t)).sqrt() * erf_scaled(z).unwrap().re
    };
    gauss_legendre(f, lower, 0.0, ((-lower) * 4.0) as usize) / (2.0 * PI * t)
}

#[test]
fn density_matches_fixed_window_quadrature() {
    for &(gamma, kt) in &[(1e-4, 1.0), (1e-4, 4.0), (1.5e-4, 2.0)] {
        let cfg = config(gamma, kt);
        let d = cfg.diffusion();
        for &(x, t) in &[(10.0, 12.0), (10.0, 40.0), (3.0, 25.0), (18.0, 15.0)] {
            let p = cfg.density(x, t).unwrap();
            let want = density_oracle(x, t, d, -400.0);
            assert!((p - want).abs() < 1e-8, "g={gamma} kT={kt} x={x} t={t} {p} {want}");
            assert!(p >= 0.0);
        }
    }
}

#[test]
fn cutoff_does_not_matter() {
    let base = config(1e-4, 2.0);
    for &(x, t) in &[(10.0, 10.0), (10.0, 60.0), (5.0, 90.0)] {
        let a = base.with_r_min(-200.0).density(x, t).unwrap();
        let b = base.with_r_min(-400.0).density(x, t).unwrap();
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn diffusion_damps_the_oscillations() {
    let trace = |kt: f64| -> Vec<f64> {
        let cfg = config(1e-4, kt);
        (0..=60).map(|i| cfg.density(10.0, 10.0 + 0.5 * i as f64).unwrap()).collect()
    };
    let tv = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    let values: Vec<f64> = [0.0, 1.0, 4.0].iter().map(|&kt| tv(&trace(kt))).collect();
    assert!(values[0] > values[1] && values[1] > values[2], "{values:?}");
}

#[test]
fn regime_warning() {
    assert!(config(1e-4, 1.0).regime_warning(100.0).is_none());
    assert!(config(1e-2, 1.0).regime_warning(100.0).is_some());
}
