//! Scenario descriptions, presets, configuration files and the runner that
//! turns a scenario into CSV tables plus a JSON manifest.

mod config;
mod output;
mod presets;
mod run;

pub use config::{apply_config, parse_config, ConfigEntry};
pub use output::{format_value, Table};
pub use presets::{preset, Preset, PRESETS};
pub use run::{run, run_tables, RunManifest, RunOutcome, RunStatus};

use crate::error::{Error, Result};
use crate::identical::Statistics;
use crate::model::{Environment, GaussianPacket, Grid, ModelConstants};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Arrival,
    Cat,
    StretchCat,
    IdenticalSingle,
    IdenticalJoint,
    Shutter,
    Trajectories,
    ResidualCheck,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Arrival,
        ScenarioKind::Cat,
        ScenarioKind::StretchCat,
        ScenarioKind::IdenticalSingle,
        ScenarioKind::IdenticalJoint,
        ScenarioKind::Shutter,
        ScenarioKind::Trajectories,
        ScenarioKind::ResidualCheck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Arrival => "arrival",
            ScenarioKind::Cat => "cat",
            ScenarioKind::StretchCat => "stretch-cat",
            ScenarioKind::IdenticalSingle => "identical-single",
            ScenarioKind::IdenticalJoint => "identical-joint",
            ScenarioKind::Shutter => "shutter",
            ScenarioKind::Trajectories => "trajectories",
            ScenarioKind::ResidualCheck => "residual-check",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::scenario(format!("unknown scenario kind '{s}'")))
    }
}

/// Optional scenario fields, used to report what a kind needs or rejects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Space,
    Time,
    Snapshots,
    Detector,
    Wavenumber,
    Statistics,
    Seeds,
    Step,
    TraceX,
    ProfileT,
    RMin,
}

impl Field {
    const ALL: [Field; 11] = [
        Field::Space,
        Field::Time,
        Field::Snapshots,
        Field::Detector,
        Field::Wavenumber,
        Field::Statistics,
        Field::Seeds,
        Field::Step,
        Field::TraceX,
        Field::ProfileT,
        Field::RMin,
    ];

    fn key(&self) -> &'static str {
        match self {
            Field::Space => "x_min/x_max/x_count",
            Field::Time => "t_min/t_max/t_count",
            Field::Snapshots => "times",
            Field::Detector => "detector",
            Field::Wavenumber => "k",
            Field::Statistics => "statistics",
            Field::Seeds => "seeds_per_branch",
            Field::Step => "step",
            Field::TraceX => "trace_x",
            Field::ProfileT => "profile_t",
            Field::RMin => "r_min",
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub constants: ModelConstants,
    pub environments: Vec<Environment>,
    pub packets: Vec<GaussianPacket>,
    pub space: Option<Grid>,
    pub time: Option<Grid>,
    /// Snapshot times for kinds that tabulate fields at a few instants.
    pub snapshots: Vec<f64>,
    pub detector: Option<f64>,
    /// Wavenumber of the released plane wave.
    pub wavenumber: Option<f64>,
    pub statistics: Vec<Statistics>,
    pub seeds_per_branch: Option<usize>,
    /// Integration step for trajectories, finite-difference step for residuals.
    pub step: Option<f64>,
    pub trace_x: Option<f64>,
    pub profile_t: Option<f64>,
    pub r_min: Option<f64>,
    pub tol: f64,
    pub notes: Vec<String>,
}

impl Scenario {
    /// An empty scenario of the given kind, with unit constants.
    pub fn new(name: impl Into<String>, kind: ScenarioKind) -> Self {
        Self {
            name: name.into(),
            kind,
            constants: ModelConstants::default(),
            environments: Vec::new(),
            packets: Vec::new(),
            space: None,
            time: None,
            snapshots: Vec::new(),
            detector: None,
            wavenumber: None,
            statistics: Vec::new(),
            seeds_per_branch: None,
            step: None,
            trace_x: None,
            profile_t: None,
            r_min: None,
            tol: default_tol(kind),
            notes: Vec::new(),
        }
    }

    fn has(&self, f: Field) -> bool {
        match f {
            Field::Space => self.space.is_some(),
            Field::Time => self.time.is_some(),
            Field::Snapshots => !self.snapshots.is_empty(),
            Field::Detector => self.detector.is_some(),
            Field::Wavenumber => self.wavenumber.is_some(),
            Field::Statistics => !self.statistics.is_empty(),
            Field::Seeds => self.seeds_per_branch.is_some(),
            Field::Step => self.step.is_some(),
            Field::TraceX => self.trace_x.is_some(),
            Field::ProfileT => self.profile_t.is_some(),
            Field::RMin => self.r_min.is_some(),
        }
    }

    /// `(required, optional)` fields of each kind; everything else is rejected.
    fn fields(kind: ScenarioKind) -> (&'static [Field], &'static [Field]) {
        use Field::*;
        match kind {
            ScenarioKind::Arrival => (&[Time, Detector], &[]),
            ScenarioKind::Cat => (&[Time], &[Space]),
            ScenarioKind::StretchCat => (&[Time], &[]),
            ScenarioKind::IdenticalSingle | ScenarioKind::IdenticalJoint => (&[Space, Snapshots, Statistics], &[]),
            ScenarioKind::Shutter => (&[Space, Time, Wavenumber], &[TraceX, ProfileT, RMin]),
            ScenarioKind::Trajectories => (&[Time, Seeds], &[Step]),
            ScenarioKind::ResidualCheck => (&[Space, Snapshots], &[Step]),
        }
    }

    fn packet_count(kind: ScenarioKind) -> (usize, usize) {
        match kind {
            ScenarioKind::Arrival | ScenarioKind::Cat | ScenarioKind::Trajectories => (1, 1),
            ScenarioKind::StretchCat | ScenarioKind::ResidualCheck => (1, usize::MAX),
            ScenarioKind::IdenticalSingle | ScenarioKind::IdenticalJoint => (2, 2),
            ScenarioKind::Shutter => (0, 0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        let bad = |msg: String| Err(Error::scenario(format!("{} ({kind}): {msg}", self.name)));
        if let Err(e) = self.constants.validate() {
            return bad(e.to_string());
        }
        if self.constants.g != 0.0 && kind != ScenarioKind::Cat {
            return bad("a nonzero g is only accepted by the cat kind".into());
        }
        if self.environments.is_empty() {
            return bad("at least one environment is required".into());
        }
        for env in &self.environments {
            if let Err(e) = env.validate() {
                return bad(e.to_string());
            }
        }
        let (lo, hi) = Self::packet_count(kind);
        let n = self.packets.len();
        if n < lo || n > hi {
            let want = match (lo, hi) {
                (0, 0) => "no packets".to_string(),
                (l, h) if l == h => format!("exactly {l} packet(s)"),
                (l, _) => format!("at least {l} packet(s)"),
            };
            return bad(format!("needs {want}, got {n}"));
        }
        for p in &self.packets {
            if let Err(e) = p.validate() {
                return bad(e.to_string());
            }
        }
        let (required, optional) = Self::fields(kind);
        for f in Field::ALL {
            if required.contains(&f) && !self.has(f) {
                return bad(format!("missing {}", f.key()));
            }
            if !required.contains(&f) && !optional.contains(&f) && self.has(f) {
                return bad(format!("does not use {}", f.key()));
            }
        }
        for grid in [self.space, self.time].into_iter().flatten() {
            if let Err(e) = grid.validate() {
                return bad(e.to_string());
            }
        }
        if let Some(t) = self.time {
            if t.min < 0.0 {
                return bad("times must be non-negative".into());
            }
        }
        if self.snapshots.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("snapshot times must be finite and non-negative".into());
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tolerance must lie in (0, 1), got {}", self.tol));
        }
        match kind {
            ScenarioKind::Cat => {
                let p = self.packets[0];
                if p.eta != 0.0 && self.constants.g != 0.0 {
                    return bad("stretched cat states need g = 0".into());
                }
            }
            ScenarioKind::IdenticalSingle | ScenarioKind::IdenticalJoint => {
                if self.packets.iter().any(|p| p.eta != 0.0) {
                    return bad("one-particle states must be built from minimum-uncertainty packets".into());
                }
            }
            ScenarioKind::Shutter => {
                let k = self.wavenumber.unwrap_or_default();
                if !(k > 0.0 && k.is_finite()) {
                    return bad("k must be positive".into());
                }
                if let Some(t) = self.time {
                    if t.min <= 0.0 {
                        return bad("shutter times must be positive".into());
                    }
                }
                if let Some(r) = self.r_min {
                    if !(r < 0.0 && r.is_finite()) {
                        return bad("r_min must be negative".into());
                    }
                }
                if let Some(t) = self.profile_t {
                    if !(t > 0.0) {
                        return bad("profile_t must be positive".into());
                    }
                }
            }
            ScenarioKind::Trajectories => {
                if self.seeds_per_branch == Some(0) {
                    return bad("seeds_per_branch must be positive".into());
                }
            }
            _ => {}
        }
        if let Some(h) = self.step {
            if !(h > 0.0 && h.is_finite()) {
                return bad("step must be positive".into());
            }
        }
        Ok(())
    }
}

fn default_tol(kind: ScenarioKind) -> f64 {
    match kind {
        ScenarioKind::Shutter => 1e-10,
        _ => 1e-9,
    }
}
