//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment. List values are comma
//! separated. `env` and `packet` may repeat; the first occurrence in a file
//! replaces the list inherited from a preset. `gamma` and `kT` lists expand
//! to every combination. The value `none` clears an optional field.

use super::{Scenario, ScenarioKind};
use crate::error::{Error, Result};
use crate::identical::Statistics;
use crate::model::{Environment, GaussianPacket, Grid};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::scenario(format!("line {}: expected key = value", i + 1)))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::scenario(format!("line {}: empty key", i + 1)));
        }
        out.push(ConfigEntry {
            line: i + 1,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn number(e: &ConfigEntry, s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::scenario(format!("line {}: {} expects a number, got '{s}'", e.line, e.key)))?;
    if !v.is_finite() {
        return Err(Error::scenario(format!("line {}: {} must be finite", e.line, e.key)));
    }
    Ok(v)
}

fn numbers(e: &ConfigEntry) -> Result<Vec<f64>> {
    e.value.split(',').map(|s| number(e, s)).collect()
}

fn count(e: &ConfigEntry) -> Result<usize> {
    e.value
        .trim()
        .parse()
        .map_err(|_| Error::scenario(format!("line {}: {} expects a count, got '{}'", e.line, e.key, e.value)))
}

fn is_none(e: &ConfigEntry) -> bool {
    e.value.eq_ignore_ascii_case("none")
}

fn optional(e: &ConfigEntry) -> Result<Option<f64>> {
    if is_none(e) {
        Ok(None)
    } else {
        number(e, &e.value).map(Some)
    }
}

/// Pending edits to one of the two grids.
#[derive(Default)]
struct GridEdit {
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    clear: bool,
    touched: bool,
}

impl GridEdit {
    fn apply(self, current: Option<Grid>, which: &str) -> Result<Option<Grid>> {
        if self.clear {
            return Ok(None);
        }
        if !self.touched {
            return Ok(current);
        }
        let base = current.map(|g| (Some(g.min), Some(g.max), Some(g.count))).unwrap_or((None, None, None));
        match (self.min.or(base.0), self.max.or(base.1), self.count.or(base.2)) {
            (Some(a), Some(b), Some(n)) => Ok(Some(Grid { min: a, max: b, count: n })),
            _ => Err(Error::scenario(format!("{which} grid needs {which}_min, {which}_max and {which}_count"))),
        }
    }
}

/// Applies configuration entries on top of `base`, or builds a scenario
/// from scratch when there is no base (then `kind` is required).
pub fn apply_config(base: Option<Scenario>, entries: &[ConfigEntry]) -> Result<Scenario> {
    let mut s = match base {
        Some(s) => s,
        None => {
            let kind = entries
                .iter()
                .rev()
                .find(|e| e.key == "kind")
                .ok_or_else(|| Error::scenario("configuration without a preset must set kind"))?;
            let kind: ScenarioKind = kind.value.parse()?;
            Scenario::new("custom", kind)
        }
    };
    let (mut x_edit, mut t_edit) = (GridEdit::default(), GridEdit::default());
    let (mut gammas, mut kts): (Option<Vec<f64>>, Option<Vec<f64>>) = (None, None);
    let (mut envs, mut packets, mut notes): (Option<Vec<Environment>>, Option<Vec<GaussianPacket>>, Option<Vec<String>>) =
        (None, None, None);
    for e in entries {
        match e.key.as_str() {
            "name" => s.name = e.value.clone(),
            "kind" => {
                let kind: ScenarioKind = e.value.parse()?;
                if kind != s.kind {
                    return Err(Error::scenario(format!(
                        "line {}: cannot change kind from {} to {kind}",
                        e.line, s.kind
                    )));
                }
            }
            "hbar" => s.constants.hbar = number(e, &e.value)?,
            "mass" => s.constants.mass = number(e, &e.value)?,
            "g" => s.constants.g = number(e, &e.value)?,
            "gamma" => gammas = Some(numbers(e)?),
            "kT" | "kt" => kts = Some(numbers(e)?),
            "env" => {
                let v = numbers(e)?;
                if v.len() != 2 {
                    return Err(Error::scenario(format!("line {}: env expects gamma, kT", e.line)));
                }
                envs.get_or_insert_with(Vec::new).push(Environment { gamma: v[0], kt: v[1] });
            }
            "packet" => {
                let v = numbers(e)?;
                if v.len() != 4 {
                    return Err(Error::scenario(format!("line {}: packet expects x0, p0, sigma0, eta", e.line)));
                }
                packets.get_or_insert_with(Vec::new).push(GaussianPacket {
                    x0: v[0],
                    p0: v[1],
                    sigma0: v[2],
                    eta: v[3],
                });
            }
            "x_min" | "x_max" | "x_count" | "t_min" | "t_max" | "t_count" => {
                let edit = if e.key.starts_with('x') { &mut x_edit } else { &mut t_edit };
                if is_none(e) {
                    edit.clear = true;
                    continue;
                }
                edit.touched = true;
                match &e.key[2..] {
                    "min" => edit.min = Some(number(e, &e.value)?),
                    "max" => edit.max = Some(number(e, &e.value)?),
                    _ => edit.count = Some(count(e)?),
                }
            }
            "times" => s.snapshots = if is_none(e) { Vec::new() } else { numbers(e)? },
            "detector" => s.detector = optional(e)?,
            "k" => s.wavenumber = optional(e)?,
            "statistics" => {
                s.statistics = if is_none(e) {
                    Vec::new()
                } else {
                    e.value.split(',').map(str::parse::<Statistics>).collect::<Result<_>>()?
                }
            }
            "seeds_per_branch" => s.seeds_per_branch = if is_none(e) { None } else { Some(count(e)?) },
            "step" => s.step = optional(e)?,
            "trace_x" => s.trace_x = optional(e)?,
            "profile_t" => s.profile_t = optional(e)?,
            "r_min" => s.r_min = optional(e)?,
            "tol" => s.tol = number(e, &e.value)?,
            "note" => notes.get_or_insert_with(Vec::new).push(e.value.clone()),
            other => return Err(Error::scenario(format!("line {}: unknown key '{other}'", e.line))),
        }
    }
    s.space = x_edit.apply(s.space, "x")?;
    s.time = t_edit.apply(s.time, "t")?;
    match (gammas, kts, envs) {
        (None, None, Some(list)) => s.environments = list,
        (None, None, None) => {}
        (Some(g), Some(k), None) => {
            s.environments = g
                .iter()
                .flat_map(|&gamma| k.iter().map(move |&kt| Environment { gamma, kt }))
                .collect()
        }
        (_, _, Some(_)) => return Err(Error::scenario("use either env lines or gamma/kT lists, not both")),
        _ => return Err(Error::scenario("gamma and kT lists must be given together")),
    }
    if let Some(p) = packets {
        s.packets = p;
    }
    if let Some(n) = notes {
        s.notes = n;
    }
    Ok(s)
}
