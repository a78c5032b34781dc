//! Reference implementations used only by tests. Each one follows a
//! different route from the library code it checks.
#![allow(dead_code)]

use cl_decohere::{GaussianPacket, ModelConstants};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Double-double number: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn norm(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::norm(s, e + self.lo + o.lo)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::norm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = (self.hi - p - e + self.lo) / d;
        Dd::norm(q1, r)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn from(z: Complex64) -> Self {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn add(self, o: CDd) -> CDd {
        CDd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn scale(self, d: Dd) -> CDd {
        CDd { re: self.re.mul(d), im: self.im.mul(d) }
    }

    pub fn div_f64(self, d: f64) -> CDd {
        CDd { re: self.re.div_f64(d), im: self.im.div_f64(d) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// `2/sqrt(pi)` to double-double precision.
const TWO_OVER_SQRT_PI: Dd = Dd {
    hi: 1.1283791670955126,
    lo: 1.533545961316588e-17,
};

/// Maclaurin series `erf z = 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1))`
/// summed in double-double arithmetic, so the cancellation between terms
/// of size `e^{|z|^2}` costs nothing for `|z| <= 6`.
pub fn erf_maclaurin(z: Complex64) -> Complex64 {
    let zz = CDd::from(z);
    let minus_z2 = zz.mul(zz).scale(Dd::new(-1.0));
    let mut term = zz;
    let mut sum = zz;
    let bound = (z.norm_sqr() * 2.0 + 60.0) as usize;
    for n in 1..bound {
        term = term.mul(minus_z2).div_f64(n as f64);
        sum = sum.add(term.div_f64((2 * n + 1) as f64));
    }
    sum.scale(TWO_OVER_SQRT_PI).to_c64()
}

/// `erfc z ~ e^{-z^2}/(z sqrt pi) sum (-1)^n (2n-1)!!/(2z^2)^n` for
/// `Re z > 0` and large `|z|`, truncated at the smallest term.
pub fn erfc_asymptotic(z: Complex64) -> Complex64 {
    let w = 1.0 / (2.0 * z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..200 {
        let next = -term * w * (2 * n - 1) as f64;
        if next.norm() >= term.norm() {
            break;
        }
        term = next;
        sum += term;
    }
    (-z * z).exp() / (z * PI.sqrt()) * sum
}

/// `erf z` through the asymptotic expansion, using oddness for `Re z < 0`.
pub fn erf_asymptotic(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -erf_asymptotic(-z);
    }
    1.0 - erfc_asymptotic(z)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 20-point Gauss-Legendre over `panels` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre_rule(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        total += rule.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

pub fn gauss_legendre_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let re = gauss_legendre(|x| f(x).re, a, b, panels);
    let im = gauss_legendre(|x| f(x).im, a, b, panels);
    Complex64::new(re, im)
}

/// Fresnel integrals `C, S` by quadrature of `cos, sin(pi u^2/2)`.
pub fn fresnel_quadrature(x: f64) -> (f64, f64) {
    let panels = ((x.abs() * x.abs().max(1.0)) * 20.0).ceil().max(4.0) as usize;
    let c = gauss_legendre(|u| (0.5 * PI * u * u).cos(), 0.0, x, panels);
    let s = gauss_legendre(|u| (0.5 * PI * u * u).sin(), 0.0, x, panels);
    (c, s)
}

/// Trapezoid rule with `n` intervals.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * f(a) + inner + 0.5 * f(b))
}

/// Initial wavefunction
/// `(2 pi s^2 (1 + i eta)^2)^(-1/4) exp[-(x - x0)^2/(4 s^2 (1 + i eta)) + i p0 x/hbar]`.
pub fn psi0(p: &GaussianPacket, x: f64, c: &ModelConstants) -> Complex64 {
    psi_free(p, x, 0.0, c)
}

/// Schrodinger evolution of the packet without bath or force:
/// `psi(x, t) = A sqrt(s/s_t) exp[-(x - x0 - v t)^2/(4 s_t)] exp[i p0 x/hbar - i p0^2 t/(2 m hbar)]`,
/// `s = sigma0^2 (1 + i eta)`, `s_t = s + i hbar t/(2m)`.
pub fn psi_free(p: &GaussianPacket, x: f64, t: f64, c: &ModelConstants) -> Complex64 {
    let one_i_eta = Complex64::new(1.0, p.eta);
    let s = p.sigma0 * p.sigma0 * one_i_eta;
    let st = s + Complex64::new(0.0, c.hbar * t / (2.0 * c.mass));
    let amp = (2.0 * PI * p.sigma0 * p.sigma0 * one_i_eta * one_i_eta).powf(-0.25);
    let y = x - p.x0 - p.p0 * t / c.mass;
    let phase = Complex64::new(0.0, p.p0 * x / c.hbar - p.p0 * p.p0 * t / (2.0 * c.mass * c.hbar));
    amp * (s / st).sqrt() * (-y * y / (4.0 * st) + phase).exp()
}

/// Decoherence function of the symmetric cat written through the initial
/// complex width: `u = eta + hbar tau/(2 m s0^2)`, `W0^2 = s0^2 (1 + u^2)`,
/// `Xa = x0 + p0 tau/m`, `beta = 2 p0 W0^2/hbar - u Xa`,
/// `Gamma = -(1 - W0^2/w^2)(Xa^2 + beta^2)/(2 W0^2)`.
pub fn cat_gamma_compact(x0: f64, p0: f64, sigma0: f64, eta: f64, tau: f64, width_sq: f64, c: &ModelConstants) -> f64 {
    let s2 = sigma0 * sigma0;
    let u = eta + c.hbar * tau / (2.0 * c.mass * s2);
    let w0 = s2 * (1.0 + u * u);
    let xa = x0 + p0 * tau / c.mass;
    let beta = 2.0 * p0 * w0 / c.hbar - u * xa;
    -(1.0 - w0 / width_sq) * (xa * xa + beta * beta) / (2.0 * w0)
}

/// `tau(t)` evaluated by direct quadrature of `e^{-2 gamma t'}`.
pub fn tau_quadrature(t: f64, gamma: f64) -> f64 {
    gauss_legendre(|u| (-2.0 * gamma * u).exp(), 0.0, t, 8)
}

/// `K(t) = int_0^t 2 tau(t')^2 dt'` by nested quadrature.
pub fn thermal_spread_quadrature(t: f64, gamma: f64) -> f64 {
    gauss_legendre(|u| 2.0 * tau_quadrature(u, gamma).powi(2), 0.0, t, 16)
}

/// Squared width assembled from its four contributions, with `tau` and
/// `K` computed by quadrature.
pub fn width_sq_quadrature(p: &GaussianPacket, gamma: f64, d: f64, t: f64, c: &ModelConstants) -> f64 {
    let tau = tau_quadrature(t, gamma);
    let k = thermal_spread_quadrature(t, gamma);
    let s2 = p.sigma0 * p.sigma0;
    let q = c.hbar / (c.mass * s2);
    s2 * (1.0 + q * q * tau * tau / 4.0 + p.eta * q * tau + p.eta * p.eta) + d * k / (c.mass * c.mass)
}

/// Seeded generator for reproducible random draws.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
