//! Arrival-time distributions at a detector and Bohmian trajectories.
//!
//! `Pi(X, t) = |J(X, t)| / int_0^T |J(X, t')| dt'`, where the window `T` is
//! grown by doubling until the flux has decayed, and capped at
//! `max_horizon` because the current tails are algebraic.

use crate::cat::CatState;
use crate::error::{Error, Result};
use crate::gaussian::EvolvedGaussian;
use crate::numerics::{integrate_rk4, normal_quantile, Quadrature, SemiInfinite};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A probability density with its current, as seen by a detector or a
/// Bohmian particle.
pub trait Flow: Sync {
    fn density(&self, x: f64, t: f64) -> f64;
    fn current(&self, x: f64, t: f64) -> f64;

    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        let p = self.density(x, t);
        if !(p >= 1e-300) {
            return Err(Error::Trajectory {
                t,
                x,
                reason: "density below 1e-300".into(),
            });
        }
        Ok(self.current(x, t) / p)
    }
}

impl Flow for EvolvedGaussian {
    fn density(&self, x: f64, t: f64) -> f64 {
        self.probability_density(x, t)
    }
    fn current(&self, x: f64, t: f64) -> f64 {
        self.probability_current(x, t)
    }
    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        self.bohm_velocity(x, t)
    }
}

impl Flow for CatState {
    fn density(&self, x: f64, t: f64) -> f64 {
        CatState::density(self, x, t)
    }
    fn current(&self, x: f64, t: f64) -> f64 {
        CatState::current(self, x, t)
    }
    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        CatState::velocity(self, x, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalOptions {
    pub tol: f64,
    /// Upper end of the observation window.
    pub max_horizon: f64,
}

impl Default for ArrivalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_horizon: 200.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalDistribution {
    pub detector: f64,
    pub times: Vec<f64>,
    pub pi_values: Vec<f64>,
    pub mean: f64,
    pub rms: f64,
    /// `int Pi dt` over the window, integrated independently of the
    /// normalizing denominator.
    pub normalization_check: f64,
    pub horizon: f64,
    pub truncated: bool,
}

/// Panels `[0, T0], [T0, 2T0], ...` up to `horizon`, matching the doubling
/// rule so that the same integrand features are resolved.
fn doubling_panels(t0: f64, horizon: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, t0.min(horizon))];
    let mut hi = t0;
    while hi < horizon {
        let next = (2.0 * hi).min(horizon);
        out.push((hi, next));
        hi = next;
    }
    out
}

fn panel_integral<F: FnMut(f64) -> f64>(mut f: F, panels: &[(f64, f64)], q: &Quadrature) -> Result<f64> {
    let mut total = 0.0;
    for &(a, b) in panels {
        total += q.integrate(&mut f, a, b)?.value;
    }
    Ok(total)
}

pub fn arrival_distribution<F: Flow>(
    flow: &F,
    detector: f64,
    times: &[f64],
    opts: &ArrivalOptions,
) -> Result<ArrivalDistribution> {
    if !detector.is_finite() {
        return Err(Error::domain("detector position must be finite"));
    }
    let flux = |t: f64| flow.current(detector, t).abs();
    let rule = SemiInfinite::new(opts.tol).with_max_horizon(opts.max_horizon);
    let denom = rule.integrate(flux)?;
    let z = denom.result.value;
    if !(z > 1e-300) {
        return Err(Error::scenario(format!("no probability flux reaches the detector at X = {detector}")));
    }
    let panels = doubling_panels(rule.initial_horizon, denom.horizon);
    let q = Quadrature::new(opts.tol * 0.1).with_abs_tol(opts.tol * 1e-3 * z);
    let norm = panel_integral(flux, &panels, &q)? / z;
    let first = panel_integral(|t| t * flux(t), &panels, &q)? / z;
    let second = panel_integral(|t| t * t * flux(t), &panels, &q)? / z;
    let var = (second - first * first).max(0.0);
    Ok(ArrivalDistribution {
        detector,
        times: times.to_vec(),
        pi_values: times.iter().map(|&t| flux(t) / z).collect(),
        mean: first,
        rms: var.sqrt(),
        normalization_check: norm,
        horizon: denom.horizon,
        truncated: denom.truncated,
    })
}

/// `(tau_a, sigma_a)` of a normalized distribution.
pub fn mean_and_rms(dist: &ArrivalDistribution) -> Result<(f64, f64)> {
    if (dist.normalization_check - 1.0).abs() > 1e-6 {
        return Err(Error::domain(format!(
            "distribution is not normalized (integral {})",
            dist.normalization_check
        )));
    }
    Ok((dist.mean, dist.rms))
}

/// Mean and rms of a density on `[0, horizon]`; fails if it does not
/// integrate to one within `1e-6`.
pub fn density_moments<F: Fn(f64) -> f64>(pi: F, horizon: f64, tol: f64) -> Result<(f64, f64)> {
    let q = Quadrature::new(tol);
    let n = q.integrate(&pi, 0.0, horizon)?.value;
    if (n - 1.0).abs() > 1e-6 {
        return Err(Error::domain(format!("distribution is not normalized (integral {n})")));
    }
    let m1 = q.integrate(|t| t * pi(t), 0.0, horizon)?.value;
    let m2 = q.integrate(|t| t * t * pi(t), 0.0, horizon)?.value;
    Ok((m1, (m2 - m1 * m1).max(0.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedLabel {
    Left,
    Right,
    Center,
}

impl SeedLabel {
    pub fn name(&self) -> &'static str {
        match self {
            SeedLabel::Left => "left",
            SeedLabel::Right => "right",
            SeedLabel::Center => "center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub x: f64,
    pub label: SeedLabel,
}

/// `n` positions at the midpoint quantiles `(k + 1/2)/n` of a Gaussian.
pub fn quantile_seeds(center: f64, width: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| center + width * normal_quantile((k as f64 + 0.5) / n as f64))
        .collect()
}

/// Quantile seeds for each cat branch, followed by the two branch centers.
pub fn cat_seeds(cat: &CatState, per_branch: usize) -> Vec<Seed> {
    let (a, b) = cat.branches();
    let (left, right) = if a.packet.x0 <= b.packet.x0 { (a, b) } else { (b, a) };
    let mut out = Vec::with_capacity(2 * per_branch + 2);
    for (branch, label) in [(left, SeedLabel::Left), (right, SeedLabel::Right)] {
        let w = branch.packet.position_uncertainty();
        out.extend(quantile_seeds(branch.packet.x0, w, per_branch).into_iter().map(|x| Seed { x, label }));
    }
    out.push(Seed { x: left.packet.x0, label: SeedLabel::Center });
    out.push(Seed { x: right.packet.x0, label: SeedLabel::Center });
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub seed: Seed,
    /// Position at each output time; `NaN` after termination.
    pub positions: Vec<f64>,
    pub terminated_at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryBundle {
    pub times: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
}

impl TrajectoryBundle {
    /// Final positions of trajectories that reached the last output time.
    pub fn terminal_positions(&self) -> Vec<f64> {
        self.trajectories
            .iter()
            .filter_map(|tr| tr.positions.last().copied().filter(|x| x.is_finite()))
            .collect()
    }
}

/// Integrates the guidance equation `dx/dt = J/P` from `times[0]` for every
/// seed, recording positions at `times` (increasing). Each step is at most `h`.
pub fn bohm_trajectories<F: Flow>(flow: &F, seeds: &[Seed], times: &[f64], h: f64) -> Result<TrajectoryBundle> {
    if times.is_empty() || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("output times must be non-empty and non-decreasing"));
    }
    if !(h > 0.0) {
        return Err(Error::domain("step size must be positive"));
    }
    let h = h.max(1e-6);
    let trajectories = seeds
        .par_iter()
        .map(|&seed| {
            let mut positions = Vec::with_capacity(times.len());
            let mut x = seed.x;
            let mut terminated_at = None;
            positions.push(x);
            for w in times.windows(2) {
                if terminated_at.is_some() {
                    positions.push(f64::NAN);
                    continue;
                }
                match integrate_rk4(|x, t| flow.velocity(x, t).unwrap_or(f64::NAN), x, w[0], w[1], h) {
                    Ok(next) => {
                        x = next;
                        positions.push(x);
                    }
                    Err(Error::Trajectory { t, .. }) => {
                        terminated_at = Some(t);
                        positions.push(f64::NAN);
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(Trajectory {
                seed,
                positions,
                terminated_at,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryBundle {
        times: times.to_vec(),
        trajectories,
    })
}

/// Gap-contrast cluster count of a set of positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub clusters: usize,
    /// Largest `g_i / max(g_{i-1}, g_{i+1})` over interior gaps.
    pub max_gap_ratio: f64,
}

/// Default contrast above which a gap separates two clusters.
pub const GAP_RATIO_THRESHOLD: f64 = 1.5;

/// Sorts the positions and counts gaps that are at least `threshold`
/// times larger than both neighbouring gaps.
pub fn gap_clusters(positions: &[f64], threshold: f64) -> ClusterSummary {
    let mut xs: Vec<f64> = positions.iter().copied().filter(|x| x.is_finite()).collect();
    xs.sort_by(f64::total_cmp);
    let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let mut max_ratio: f64 = 0.0;
    let mut clusters = 1;
    for i in 1..gaps.len().saturating_sub(1) {
        let neighbour = gaps[i - 1].max(gaps[i + 1]);
        let r = if neighbour > 0.0 { gaps[i] / neighbour } else { f64::INFINITY };
        max_ratio = max_ratio.max(r);
        if r >= threshold {
            clusters += 1;
        }
    }
    ClusterSummary {
        clusters,
        max_gap_ratio: max_ratio,
    }
}
