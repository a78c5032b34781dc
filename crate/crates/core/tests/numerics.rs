mod common;

use cl_decohere::numerics::{
    erf, erf_complex, fresnel, integrate_adaptive, integrate_rk4, integrate_semi_infinite_time, residual_cl, rk4_step,
    Quadrature,
};
use cl_decohere::{Environment, ModelConstants};
use common::{erf_asymptotic, erf_maclaurin, fresnel_quadrature};
use num_complex::Complex64;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

#[test]
fn erf_reference_values() {
    let one = erf_complex(Complex64::new(1.0, 0.0)).unwrap();
    assert!((one.re - 0.842_700_792_949_714_87).abs() < 1e-15 && one.im == 0.0);
    let i = erf_complex(Complex64::new(0.0, 1.0)).unwrap();
    assert!(i.re == 0.0 && (i.im - 1.650_425_758_797_542_9).abs() < 1e-15);
    let z = erf_complex(Complex64::new(2.0, 3.0)).unwrap();
    let want = Complex64::new(-20.829_461_427_614_568, 8.687_318_271_470_163);
    assert!(rel(z, want) < 1e-12, "{z} {:e}", rel(z, want));
    assert_eq!(erf_complex(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn erf_matches_double_double_series_inside_radius_six() {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let z = Complex64::new(-6.0 + 12.0 * i as f64 / 19.0, -6.0 + 12.0 * j as f64 / 19.0);
            if z.norm() > 6.0 {
                continue;
            }
            worst = worst.max(rel(erf_complex(z).unwrap(), erf_maclaurin(z)));
        }
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

#[test]
fn erf_matches_asymptotic_expansion_far_out() {
    let mut worst: f64 = 0.0;
    for r in [6.5, 9.0, 14.0, 20.0, 25.0] {
        for k in 0..24 {
            let th = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 24.0;
            let z = Complex64::from_polar(r, th);
            worst = worst.max(rel(erf_complex(z).unwrap(), erf_asymptotic(z)));
        }
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

#[test]
fn real_axis_matches_libm() {
    for i in 0..=240 {
        let x = -6.0 + 0.05 * i as f64;
        let want = libm::erf(x);
        assert!((erf(x) - want).abs() < 1e-14, "x = {x}");
        assert!((erf_complex(Complex64::new(x, 0.0)).unwrap().re - want).abs() < 1e-14);
    }
}

#[test]
fn real_axis_agrees_with_statrs_to_its_precision() {
    // statrs is only good to about 1e-10 on this range
    for i in 0..=240 {
        let x = -6.0 + 0.05 * i as f64;
        assert!((erf(x) - statrs::function::erf::erf(x)).abs() < 1e-9, "x = {x}");
    }
}

#[test]
fn fresnel_matches_quadrature() {
    let (c1, s1) = fresnel(1.0).unwrap();
    assert!((c1 - 0.779_893_400_376_822_8).abs() < 1e-12);
    assert!((s1 - 0.438_259_147_390_354_8).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for i in 0..=200 {
        let x = -10.0 + 0.1 * i as f64;
        let (c, s) = fresnel(x).unwrap();
        let (cq, sq) = fresnel_quadrature(x);
        worst = worst.max((c - cq).abs()).max((s - sq).abs());
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn fresnel_limits() {
    assert_eq!(fresnel(0.0).unwrap(), (0.0, 0.0));
    let (c, s) = fresnel(1e6).unwrap();
    assert!((c - 0.5).abs() < 1e-6 && (s - 0.5).abs() < 1e-6);
    assert!(fresnel(f64::NAN).is_err());
}

#[test]
fn quadrature_examples() {
    let r = integrate_adaptive(|x| x, 0.0, 1.0, 1e-12).unwrap();
    assert!((r.value - 0.5).abs() < 1e-15);
    let r = integrate_adaptive(|x| (40.0 * x).cos(), 0.0, 1.0, 1e-12).unwrap();
    assert!((r.value - 40f64.sin() / 40.0).abs() < 1e-12);
    let r = integrate_semi_infinite_time(|t| (-t).exp(), 1e-10).unwrap();
    assert!((r.value - 1.0).abs() < 1e-9);
    assert!(r.error_estimate >= 0.0);
}

#[test]
fn quadrature_budget_is_reported() {
    let err = Quadrature::new(1e-14).with_budget(45).integrate(|x| (50.0 * x).sin().abs(), 0.0, 3.0).unwrap_err();
    assert!(err.is_convergence());
}

#[test]
fn rk4_examples() {
    assert_eq!(rk4_step(|_, _| 2.5, 1.0, 0.0, 0.1).unwrap(), 1.25);
    let e = integrate_rk4(|x, _| x, 1.0, 0.0, 1.0, 1e-3).unwrap();
    assert!((e - std::f64::consts::E).abs() < 1e-8);
}

#[test]
fn rk4_is_fourth_order() {
    // dx/dt = sin(t) x has x(t) = exp(1 - cos t)
    let exact = (1.0 - 2f64.cos()).exp();
    let err = |h: f64| (integrate_rk4(|x, t| t.sin() * x, 1.0, 0.0, 2.0, h).unwrap() - exact).abs();
    let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
    let order = ((e1 / e2).log2() + (e2 / e3).log2()) / 2.0;
    assert!((3.7..=4.3).contains(&order), "order {order}");
    assert!((13.0..=19.0).contains(&(e1 / e2)), "ratio {}", e1 / e2);
}

#[test]
fn residual_is_second_order_in_the_step() {
    // a solution of the closed free equation: plane-wave product times a time phase
    let c = ModelConstants::default();
    let env = Environment::closed();
    let rho = |x: f64, y: f64, t: f64| {
        let (k, q) = (1.3, -0.4);
        Complex64::new(0.0, k * x - q * y - 0.5 * (k * k - q * q) * t).exp()
    };
    let r = residual_cl(rho, (0.2, 0.7, 1.1), 1e-3, &env, &c);
    assert!(r.norm() < 1e-5);
    // a state that is not a solution: the leading truncation error scales as h^2
    let bad = |x: f64, y: f64, t: f64| Complex64::new((x * x - y + t).sin(), 0.3 * x * y);
    let base = residual_cl(bad, (0.3, -0.2, 0.5), 1e-2, &env, &c);
    let fine = residual_cl(bad, (0.3, -0.2, 0.5), 5e-3, &env, &c);
    assert!(base.norm() > 0.1 && (base - fine).norm() < 1e-3);
    // constant density matrix, no force, no diffusion
    assert_eq!(residual_cl(|_, _, _| Complex64::new(0.3, 0.1), (1.0, -1.0, 2.0), 1e-3, &env, &c).norm(), 0.0);
}

#[test]
fn residual_quadruples_when_step_doubles() {
    use cl_decohere::gaussian::EvolvedGaussian;
    use cl_decohere::GaussianPacket;
    let c = ModelConstants::default();
    let env = Environment::new(0.2, 3.0).unwrap();
    let g = EvolvedGaussian::new(GaussianPacket::new(0.0, 1.0, 0.5, 0.5).unwrap(), env, c).unwrap();
    let rho = |x: f64, y: f64, t: f64| g.density_matrix_xx(x, y, t);
    let r1 = residual_cl(rho, (0.4, -0.3, 0.6), 2e-2, &env, &c).norm();
    let r2 = residual_cl(rho, (0.4, -0.3, 0.6), 4e-2, &env, &c).norm();
    let ratio = r2 / r1;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn real_axis_reference_points() {
    // high-precision values
    for (x, want) in [
        (-1.6, -0.976_348_383_344_644_0),
        (0.5, 0.520_499_877_813_046_5),
        (3.0, 0.999_977_909_503_001_4),
    ] {
        assert!((erf(x) - want).abs() < 1e-15, "x = {x}");
    }
}
