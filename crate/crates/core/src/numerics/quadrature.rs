//! Globally adaptive Gauss-Kronrod (7/15) quadrature and a doubling rule
//! for integrals over `[0, inf)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Segment { a, b, value, error }
}

/// Adaptive integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Quadrature {
    pub fn new(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_evaluations: 500_000,
        }
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Bisects the worst segment until the summed error estimate drops
    /// below `max(abs_tol, rel_tol |value|)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<QuadratureResult> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain("integration limits must be finite"));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        if a == b {
            return Ok(QuadratureResult::default());
        }
        let first = kronrod15(&mut f, a, b);
        let mut evaluations = 15;
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        loop {
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                break;
            }
            if !value.is_finite() {
                return Err(Error::domain("integrand produced a non-finite value"));
            }
            if evaluations + 30 > self.max_evaluations {
                return Err(Error::Convergence {
                    what: "adaptive quadrature".into(),
                    partial: QuadratureResult { value, error_estimate: error, evaluations },
                });
            }
            let worst = heap.pop().expect("heap holds at least one segment");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
                // cannot bisect further; accept what we have if it is the
                // floating-point floor, otherwise report
                heap.push(worst);
                return Err(Error::Convergence {
                    what: "adaptive quadrature (segment below resolution)".into(),
                    partial: QuadratureResult { value, error_estimate: error, evaluations },
                });
            }
            let left = kronrod15(&mut f, worst.a, mid);
            let right = kronrod15(&mut f, mid, worst.b);
            evaluations += 30;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            // re-sum periodically so that cancellation in the running
            // totals does not accumulate
            if heap.len() % 64 == 0 {
                value = heap.iter().map(|s| s.value).sum();
                error = heap.iter().map(|s| s.error).sum();
            }
        }
        value = heap.iter().map(|s| s.value).sum();
        error = heap.iter().map(|s| s.error).sum();
        Ok(QuadratureResult {
            value,
            error_estimate: error,
            evaluations,
        })
    }
}

/// `int_a^b f` with absolute and relative tolerance `tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    Quadrature::new(tol).integrate(f, a, b)
}

/// Outcome of the doubling rule over `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonIntegral {
    pub result: QuadratureResult,
    pub horizon: f64,
    /// True when the tail was cut at `max_horizon` before the doubling
    /// criterion was met.
    pub truncated: bool,
}

/// Geometric-doubling truncation for `int_0^inf f(t) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiInfinite {
    pub tol: f64,
    pub initial_horizon: f64,
    pub max_doublings: usize,
    pub max_horizon: f64,
    pub max_evaluations: usize,
}

impl SemiInfinite {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            initial_horizon: 1.0,
            max_doublings: 60,
            max_horizon: f64::INFINITY,
            max_evaluations: 500_000,
        }
    }

    pub fn with_max_horizon(mut self, h: f64) -> Self {
        self.max_horizon = h;
        self
    }

    pub fn with_initial_horizon(mut self, h: f64) -> Self {
        self.initial_horizon = h;
        self
    }

    /// Integrates `[0, T], [T, 2T], [2T, 4T], ...` until two consecutive
    /// pieces each contribute less than `tol * value`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> Result<HorizonIntegral> {
        if !(self.tol > 0.0 && self.initial_horizon > 0.0) {
            return Err(Error::domain("semi-infinite integration needs tol > 0 and a positive horizon"));
        }
        let mut lo = 0.0;
        let mut hi = self.initial_horizon.min(self.max_horizon);
        let mut total = QuadratureResult::default();
        let mut previous_small = false;
        for _ in 0..=self.max_doublings {
            let q = Quadrature {
                abs_tol: (0.01 * self.tol * total.value.abs()).max(f64::MIN_POSITIVE),
                rel_tol: self.tol * 0.1,
                max_evaluations: self.max_evaluations.saturating_sub(total.evaluations).max(1000),
            };
            let piece = q.integrate(&mut f, lo, hi).map_err(|e| match e {
                Error::Convergence { what, partial } => Error::Convergence {
                    what,
                    partial: QuadratureResult {
                        value: total.value + partial.value,
                        error_estimate: total.error_estimate + partial.error_estimate,
                        evaluations: total.evaluations + partial.evaluations,
                    },
                },
                other => other,
            })?;
            total.value += piece.value;
            total.error_estimate += piece.error_estimate;
            total.evaluations += piece.evaluations;
            let small = piece.value.abs() < self.tol * total.value.abs();
            if small && previous_small && total.value > 0.0 {
                return Ok(HorizonIntegral { result: total, horizon: hi, truncated: false });
            }
            previous_small = small;
            if hi >= self.max_horizon {
                return Ok(HorizonIntegral { result: total, horizon: hi, truncated: true });
            }
            lo = hi;
            hi = (2.0 * hi).min(self.max_horizon);
        }
        Err(Error::Convergence {
            what: "semi-infinite doubling (no decay detected)".into(),
            partial: total,
        })
    }
}

/// `int_0^inf f(t) dt` by doubling truncation, requiring genuine decay.
pub fn integrate_semi_infinite_time<F: FnMut(f64) -> f64>(f: F, tol: f64) -> Result<QuadratureResult> {
    Ok(SemiInfinite::new(tol).integrate(f)?.result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_is_exact() {
        let r = integrate_adaptive(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert_eq!(r.evaluations, 15);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn polynomial_exactness() {
        // Kronrod 15 integrates degree 22 exactly; degree 13 is comfortably inside
        let r = integrate_adaptive(|x| x.powi(13) - 3.0 * x.powi(6), -1.0, 2.0, 1e-13).unwrap();
        let exact = (2f64.powi(14) - 1.0) / 14.0 - 3.0 * (2f64.powi(7) + 1.0) / 7.0;
        assert!((r.value - exact).abs() < 1e-13 * exact.abs().max(1.0));
    }

    #[test]
    fn oscillatory() {
        let r = integrate_adaptive(|x| (40.0 * x).cos(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 40f64.sin() / 40.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits() {
        let r = integrate_adaptive(|x| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn budget_exhaustion_carries_partial() {
        let err = Quadrature::new(1e-14)
            .with_budget(100)
            .integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0)
            .unwrap_err();
        match err {
            Error::Convergence { partial, .. } => {
                assert!(partial.evaluations <= 100);
                assert!(partial.value.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_semi_infinite_time(|t| (-t).exp(), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn horizon_cap_flags_truncation() {
        let r = SemiInfinite::new(1e-10).with_max_horizon(8.0).integrate(|t| 1.0 / (1.0 + t * t)).unwrap();
        assert!(r.truncated);
        assert_eq!(r.horizon, 8.0);
        assert!((r.result.value - 8f64.atan()).abs() < 1e-10);
    }

    #[test]
    fn no_decay_is_an_error() {
        let s = SemiInfinite { max_doublings: 10, ..SemiInfinite::new(1e-8) };
        assert!(s.integrate(|_| 1.0).unwrap_err().is_convergence());
    }
}
