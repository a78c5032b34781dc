use super::output::Table;
use super::{Scenario, ScenarioKind};
use crate::analysis::fringe_contrast;
use crate::arrival::{arrival_distribution, bohm_trajectories, cat_seeds, gap_clusters, ArrivalOptions, GAP_RATIO_THRESHOLD};
use crate::cat::CatState;
use crate::error::{Error, Result};
use crate::gaussian::EvolvedGaussian;
use crate::identical::{Superposition, TwoParticleState};
use crate::model::{Environment, GaussianPacket, ModelConstants};
use crate::numerics::residual_cl_terms;
use crate::shutter::ShutterConfig;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    /// Some quantity did not reach the tolerance; affected values are
    /// best estimates and listed in the manifest.
    NonConverged,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunFlags {
    pub converged: bool,
    pub nonconverged: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub kind: ScenarioKind,
    pub version: String,
    pub parameters: Scenario,
    pub wall_time_s: f64,
    pub files: Vec<String>,
    pub flags: RunFlags,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub status: RunStatus,
}

/// Collects flags from concurrent work in a deterministic order.
#[derive(Default)]
struct Log {
    nonconverged: Vec<String>,
    warnings: Vec<String>,
}

impl Log {
    /// Keeps the best estimate of a non-converged value and records it.
    fn recover(&mut self, r: Result<f64>) -> Result<f64> {
        match r {
            Err(Error::Convergence { what, partial }) => {
                self.nonconverged.push(what);
                Ok(partial.value)
            }
            other => other,
        }
    }
}

fn tag(env: &Environment) -> String {
    format!("g{}_T{}", env.gamma, env.kt)
}

/// Evaluates the scenario and returns its tables without touching the disk.
pub fn run_tables(s: &Scenario) -> Result<(Vec<Table>, RunFlags)> {
    s.validate()?;
    let mut log = Log::default();
    let tables = match s.kind {
        ScenarioKind::Arrival => arrival(s, &mut log)?,
        ScenarioKind::Cat => cat(s)?,
        ScenarioKind::StretchCat => stretch_cat(s)?,
        ScenarioKind::IdenticalSingle => identical(s, false, &mut log)?,
        ScenarioKind::IdenticalJoint => identical(s, true, &mut log)?,
        ScenarioKind::Shutter => shutter(s, &mut log)?,
        ScenarioKind::Trajectories => trajectories(s, &mut log)?,
        ScenarioKind::ResidualCheck => residual_check(s)?,
    };
    let flags = RunFlags {
        converged: log.nonconverged.is_empty(),
        nonconverged: log.nonconverged,
        warnings: log.warnings,
    };
    Ok((tables, flags))
}

/// Runs the scenario, writes one CSV per table and `manifest.json` under
/// `out_dir`.
pub fn run(s: &Scenario, out_dir: &Path) -> Result<RunOutcome> {
    let start = Instant::now();
    let (tables, flags) = run_tables(s)?;
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", out_dir.display()));
    std::fs::create_dir_all(out_dir).map_err(io)?;
    let mut files = Vec::with_capacity(tables.len());
    for t in &tables {
        std::fs::write(out_dir.join(&t.file), t.to_csv()).map_err(io)?;
        files.push(t.file.clone());
    }
    let status = if flags.converged { RunStatus::Complete } else { RunStatus::NonConverged };
    let manifest = RunManifest {
        scenario: s.name.clone(),
        kind: s.kind,
        version: env!("CARGO_PKG_VERSION").to_string(),
        parameters: s.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        files,
        flags,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Internal(e.to_string()))?;
    std::fs::write(out_dir.join("manifest.json"), json + "\n").map_err(io)?;
    Ok(RunOutcome { manifest, status })
}

fn arrival(s: &Scenario, log: &mut Log) -> Result<Vec<Table>> {
    let times = s.time.expect("validated").points();
    let detector = s.detector.expect("validated");
    let opts = ArrivalOptions {
        tol: s.tol,
        ..ArrivalOptions::default()
    };
    let packet = s.packets[0];
    let results: Vec<_> = s
        .environments
        .par_iter()
        .map(|env| {
            let g = EvolvedGaussian::new(packet, *env, s.constants)?;
            arrival_distribution(&g, detector, &times, &opts).map_err(|e| match e {
                Error::Convergence { what, partial } => Error::Convergence {
                    what: format!("arrival distribution at {}: {what}", tag(env)),
                    partial,
                },
                other => other,
            })
        })
        .collect();
    let mut tables = Vec::new();
    let mut moments = Table::new("arrival_moments.csv", &["kT(E_unit)", "gamma(E_unit)", "tau_a(1/E_unit)", "sigma_a(1/E_unit)"]);
    for (env, r) in s.environments.iter().zip(results) {
        let dist = match r {
            Ok(d) => d,
            Err(Error::Convergence { what, .. }) => {
                log.nonconverged.push(what);
                continue;
            }
            Err(e) => return Err(e),
        };
        if dist.truncated {
            log.warnings.push(format!(
                "{}: flux still present at the horizon t = {}; moments cover [0, {}]",
                tag(env),
                dist.horizon,
                dist.horizon
            ));
        }
        if (dist.normalization_check - 1.0).abs() > 1e-6 {
            log.warnings.push(format!("{}: normalization {}", tag(env), dist.normalization_check));
        }
        let mut t = Table::new(format!("arrival_dist_{}.csv", tag(env)), &["t(1/E_unit)", "Pi(E_unit)"]);
        for (ti, pi) in dist.times.iter().zip(&dist.pi_values) {
            t.push(vec![*ti, *pi]);
        }
        tables.push(t);
        moments.push(vec![env.kt, env.gamma, dist.mean, dist.rms]);
    }
    tables.push(moments);
    Ok(tables)
}

fn cat(s: &Scenario) -> Result<Vec<Table>> {
    let times = s.time.expect("validated").points();
    let mut tables = Vec::new();
    for env in &s.environments {
        let state = CatState::symmetric(s.packets[0], *env, s.constants)?;
        let curve = state.decoherence_curve(&times);
        let mut t = Table::new(
            format!("decoherence_{}.csv", tag(env)),
            &["t(1/E_unit)", "Gamma(1)", "a(1)", "beta(L_unit)", "alpha(L_unit)"],
        );
        for i in 0..times.len() {
            t.push(vec![
                times[i],
                curve.gamma_values[i],
                curve.attenuation[i],
                curve.beta[i],
                curve.alpha[i],
            ]);
        }
        tables.push(t);
        if let Some(space) = s.space {
            let xs = space.points();
            let rows: Vec<Vec<Vec<f64>>> = times
                .par_iter()
                .map(|&ti| {
                    let snap = state.snapshot(ti);
                    xs.iter().map(|&x| vec![ti, x, snap.density(x)]).collect()
                })
                .collect();
            let mut d = Table::new(format!("cat_density_{}.csv", tag(env)), &["t(1/E_unit)", "x(L_unit)", "P(1/L_unit)"]);
            rows.into_iter().flatten().for_each(|r| d.push(r));
            tables.push(d);
        }
    }
    Ok(tables)
}

fn stretch_cat(s: &Scenario) -> Result<Vec<Table>> {
    let times = s.time.expect("validated").points();
    let mut tables = Vec::new();
    for env in &s.environments {
        let cats = s
            .packets
            .iter()
            .map(|p| CatState::symmetric(*p, *env, s.constants))
            .collect::<Result<Vec<_>>>()?;
        let mut headers = vec!["t(1/E_unit)".to_string()];
        headers.extend(s.packets.iter().map(|p| format!("a_eta{}(1)", p.eta)));
        headers.extend(s.packets.iter().map(|p| format!("Gamma_eta{}(1)", p.eta)));
        let mut t = Table::with_headers(format!("attenuation_{}.csv", tag(env)), headers);
        for &ti in &times {
            let mut row = vec![ti];
            row.extend(cats.iter().map(|c| c.attenuation(ti)));
            row.extend(cats.iter().map(|c| c.gamma(ti)));
            t.push(row);
        }
        tables.push(t);
    }
    Ok(tables)
}

/// One-particle state: the packet plus its mirror image, or the packet
/// alone when the two coincide.
pub(crate) fn one_particle_state(p: &GaussianPacket, c: &ModelConstants) -> Result<Superposition> {
    let mirror = p.mirrored();
    if mirror == *p {
        return Superposition::single(*p, c);
    }
    let one = Complex64::new(1.0, 0.0);
    Superposition::new(vec![(one, mirror), (one, *p)], c)
}

fn identical(s: &Scenario, joint: bool, log: &mut Log) -> Result<Vec<Table>> {
    let c = s.constants;
    let psi = one_particle_state(&s.packets[0], &c)?;
    let phi = one_particle_state(&s.packets[1], &c)?;
    let xs = s.space.expect("validated").points();
    let stats = &s.statistics;
    let quantity = if joint { "joint" } else { "single" };
    let unit = if joint { "1/L_unit^2" } else { "1/L_unit" };
    let mut headers = vec!["t(1/E_unit)".to_string(), "x(L_unit)".to_string()];
    headers.extend(stats.iter().map(|st| format!("P_{}({unit})", st.name())));
    let mut summary_headers = vec!["gamma(E_unit)".to_string(), "kT(E_unit)".to_string(), "t(1/E_unit)".to_string()];
    let (summary_file, summary_label, summary_unit) = if joint {
        ("joint_widths.csv", "W", "L_unit")
    } else {
        ("fringe_contrast.csv", "C", "1/L_unit")
    };
    summary_headers.extend(stats.iter().map(|st| format!("{summary_label}_{}({summary_unit})", st.name())));
    let mut summary = Table::with_headers(summary_file, summary_headers);
    let mut tables = Vec::new();
    for env in &s.environments {
        let states = stats
            .iter()
            .map(|st| TwoParticleState::new(&psi, &phi, *st, *env, c))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Table::with_headers(format!("{quantity}_{}.csv", tag(env)), headers.clone());
        for &ti in &s.snapshots {
            let snaps: Vec<_> = states.iter().map(|st| st.at(ti)).collect();
            let columns: Vec<Vec<f64>> = snaps
                .par_iter()
                .map(|sn| {
                    xs.iter()
                        .map(|&x| if joint { sn.joint_density(x, 0.0) } else { sn.single_particle_density(x) })
                        .collect()
                })
                .collect();
            for (i, &x) in xs.iter().enumerate() {
                let mut row = vec![ti, x];
                row.extend(columns.iter().map(|col| col[i]));
                t.push(row);
            }
            let mut srow = vec![env.gamma, env.kt, ti];
            for ((sn, col), st) in snaps.iter().zip(&columns).zip(stats) {
                let total = sn.total_probability();
                if (total - 1.0).abs() > 1e-6 {
                    log.warnings.push(format!("{} {} t = {ti}: total probability {total}", tag(env), st.name()));
                }
                srow.push(if joint { sn.joint_width() } else { fringe_contrast(col) });
            }
            summary.push(srow);
        }
        tables.push(t);
    }
    tables.push(summary);
    Ok(tables)
}

/// Step profile of a classical beam with the same front.
fn classical_front(x: f64, t: f64, k: f64, c: &ModelConstants) -> f64 {
    let front = c.hbar * k * t / c.mass;
    if x < front {
        1.0
    } else if x == front {
        0.5
    } else {
        0.0
    }
}

fn shutter(s: &Scenario, log: &mut Log) -> Result<Vec<Table>> {
    let k = s.wavenumber.expect("validated");
    let space = s.space.expect("validated");
    let time = s.time.expect("validated");
    let (xs, ts) = (space.points(), time.points());
    let configs = s
        .environments
        .iter()
        .map(|env| {
            let mut cfg = ShutterConfig::new(k, *env, s.constants)?.with_tol(s.tol);
            if let Some(r) = s.r_min {
                cfg = cfg.with_r_min(r);
            }
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    for cfg in &configs {
        if let Some(w) = cfg.regime_warning(time.max) {
            log.warnings.push(format!("{}: {w}", tag(&cfg.env)));
        }
    }
    let mut points: Vec<(usize, f64, f64)> = Vec::new();
    for e in 0..configs.len() {
        for &x in &xs {
            for &t in &ts {
                points.push((e, x, t));
            }
        }
    }
    let eval = |pts: &[(usize, f64, f64)]| -> Vec<Result<f64>> {
        pts.par_iter().map(|&(e, x, t)| configs[e].density(x, t)).collect()
    };
    let hdr = ["gamma(E_unit)", "kT(E_unit)", "x(L_unit)", "t(1/E_unit)", "P(1)"];
    let mut field = Table::new("shutter_xt.csv", &hdr);
    for (&(e, x, t), r) in points.iter().zip(eval(&points)) {
        let env = configs[e].env;
        field.push(vec![env.gamma, env.kt, x, t, log.recover(r)?]);
    }
    let mut tables = vec![field];
    if let Some(x0) = s.trace_x {
        let pts: Vec<_> = (0..configs.len()).flat_map(|e| ts.iter().map(move |&t| (e, x0, t))).collect();
        let mut trace = Table::new(
            "shutter_trace.csv",
            &["gamma(E_unit)", "kT(E_unit)", "x(L_unit)", "t(1/E_unit)", "P(1)", "P_classical(1)"],
        );
        for (&(e, x, t), r) in pts.iter().zip(eval(&pts)) {
            let env = configs[e].env;
            trace.push(vec![env.gamma, env.kt, x, t, log.recover(r)?, classical_front(x, t, k, &s.constants)]);
        }
        tables.push(trace);
    }
    if let Some(t0) = s.profile_t {
        let pts: Vec<_> = (0..configs.len()).flat_map(|e| xs.iter().map(move |&x| (e, x, t0))).collect();
        let mut profile = Table::new(
            "shutter_profile.csv",
            &["gamma(E_unit)", "kT(E_unit)", "x(L_unit)", "t(1/E_unit)", "P(1)", "P_classical(1)"],
        );
        for (&(e, x, t), r) in pts.iter().zip(eval(&pts)) {
            let env = configs[e].env;
            profile.push(vec![env.gamma, env.kt, x, t, log.recover(r)?, classical_front(x, t, k, &s.constants)]);
        }
        tables.push(profile);
    }
    Ok(tables)
}

fn trajectories(s: &Scenario, log: &mut Log) -> Result<Vec<Table>> {
    let times = s.time.expect("validated").points();
    let per_branch = s.seeds_per_branch.expect("validated");
    let h = s.step.unwrap_or(1e-3);
    let mut tables = Vec::new();
    let mut clusters = Table::new(
        "clusters.csv",
        &["gamma(E_unit)", "kT(E_unit)", "t(1/E_unit)", "clusters(1)", "max_gap_ratio(1)"],
    );
    for env in &s.environments {
        let state = CatState::symmetric(s.packets[0], *env, s.constants)?;
        let seeds = cat_seeds(&state, per_branch);
        let bundle = bohm_trajectories(&state, &seeds, &times, h)?;
        let mut headers = vec!["t(1/E_unit)".to_string()];
        let mut counters = [0usize; 3];
        for tr in &bundle.trajectories {
            let slot = tr.seed.label as usize;
            headers.push(format!("x_{}_{}(L_unit)", tr.seed.label.name(), counters[slot]));
            counters[slot] += 1;
            if let Some(t) = tr.terminated_at {
                log.warnings.push(format!("{}: trajectory from x = {} stopped at t = {t}", tag(env), tr.seed.x));
            }
        }
        let mut t = Table::with_headers(format!("trajectories_{}.csv", tag(env)), headers);
        for (i, &ti) in times.iter().enumerate() {
            let mut row = vec![ti];
            row.extend(bundle.trajectories.iter().map(|tr| tr.positions[i]));
            t.push(row);
        }
        tables.push(t);
        let summary = gap_clusters(&bundle.terminal_positions(), GAP_RATIO_THRESHOLD);
        clusters.push(vec![
            env.gamma,
            env.kt,
            *times.last().expect("grid has two points"),
            summary.clusters as f64,
            summary.max_gap_ratio,
        ]);
    }
    tables.push(clusters);
    Ok(tables)
}

fn residual_check(s: &Scenario) -> Result<Vec<Table>> {
    let h = s.step.unwrap_or(1e-3);
    if let Some(t) = s.snapshots.iter().find(|&&t| t <= h) {
        return Err(Error::scenario(format!("snapshot time {t} must exceed the step {h}")));
    }
    let xs = s.space.expect("validated").points();
    let mut t = Table::new(
        "residuals.csv",
        &[
            "gamma(E_unit)",
            "kT(E_unit)",
            "packet(1)",
            "t(1/E_unit)",
            "x(L_unit)",
            "cl_residual(1)",
            "continuity_residual(1)",
        ],
    );
    for env in &s.environments {
        for (ip, p) in s.packets.iter().enumerate() {
            let g = EvolvedGaussian::new(*p, *env, s.constants)?;
            for &ti in &s.snapshots {
                for &x in &xs {
                    let xp = 2.0 * g.center(ti) - x;
                    let cl = residual_cl_terms(|a, b, tt| g.density_matrix_xx(a, b, tt), (x, xp, ti), h, env, &s.constants);
                    let dt = (g.probability_density(x, ti + h) - g.probability_density(x, ti - h)) / (2.0 * h);
                    let dx = (g.probability_current(x + h, ti) - g.probability_current(x - h, ti)) / (2.0 * h);
                    let scale = dt.abs().max(dx.abs());
                    let cont = if scale > 0.0 { (dt + dx).abs() / scale } else { (dt + dx).abs() };
                    t.push(vec![env.gamma, env.kt, ip as f64, ti, x, cl.relative(), cont]);
                }
            }
        }
    }
    Ok(vec![t])
}
