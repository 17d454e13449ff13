//! Scenario description: data segments, evaluation grids, tolerances, outputs.
//!
//! Scenario files are JSON. A segment list entry is `{"end": e, "rho": r, "u": v}`
//! where `"end": null` marks the unbounded last segment.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::problem::{Problem, Tolerances};
use crate::profile::{PiecewiseProfile, ProfileKind, Segment, DEFAULT_EPS_FLOOR};

/// Spatial evaluation grid `count` points from `from` to `to` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XGrid {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl XGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.from];
        }
        let h = (self.to - self.from) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.to
                } else {
                    self.from + h * i as f64
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputKind {
    Field,
    Atoms,
    Shocks,
    Trace,
    Report,
}

impl OutputKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "field" => OutputKind::Field,
            "atoms" => OutputKind::Atoms,
            "shocks" => OutputKind::Shocks,
            "trace" => OutputKind::Trace,
            "report" => OutputKind::Report,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: Option<String>,
    pub initial: PiecewiseProfile,
    pub boundary: PiecewiseProfile,
    pub x_grid: XGrid,
    pub t_list: Vec<f64>,
    pub tolerances: Tolerances,
    pub outputs: Vec<OutputKind>,
    /// Time range used for shock tracing and the time-dependent checks.
    pub horizon: (f64, f64),
    initial_segments: Vec<Segment>,
    boundary_segments: Vec<Segment>,
    eps_floor: f64,
}

impl Scenario {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: Option<String>,
        initial_segments: Vec<Segment>,
        boundary_segments: Vec<Segment>,
        eps_floor: f64,
        x_grid: XGrid,
        t_list: Vec<f64>,
        tolerances: Tolerances,
        outputs: Vec<OutputKind>,
        horizon: (f64, f64),
    ) -> Result<Self> {
        let initial = PiecewiseProfile::build_with_floor(ProfileKind::Initial, &initial_segments, eps_floor)?;
        let boundary = PiecewiseProfile::build_with_floor(ProfileKind::Boundary, &boundary_segments, eps_floor)?;
        Ok(Scenario {
            name,
            initial,
            boundary,
            x_grid,
            t_list,
            tolerances,
            outputs,
            horizon,
            initial_segments,
            boundary_segments,
            eps_floor,
        })
    }

    pub fn eps_floor(&self) -> f64 {
        self.eps_floor
    }

    pub fn initial_segments(&self) -> &[Segment] {
        &self.initial_segments
    }

    pub fn boundary_segments(&self) -> &[Segment] {
        &self.boundary_segments
    }

    /// Rebuilds the profiles with a different density floor.
    pub fn with_eps_floor(&self, eps_floor: f64) -> Result<Self> {
        Self::assemble(
            self.name.clone(),
            self.initial_segments.clone(),
            self.boundary_segments.clone(),
            eps_floor,
            self.x_grid,
            self.t_list.clone(),
            self.tolerances,
            self.outputs.clone(),
            self.horizon,
        )
    }

    pub fn problem(&self) -> Result<Problem> {
        Ok(Problem::new(self.initial.clone(), self.boundary.clone())?.with_tolerances(self.tolerances))
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or("custom")
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["raref-delta", "boundary-takeoff", "two-deltas"];

/// The three reference scenarios.
pub fn builtin_scenarios() -> Vec<Scenario> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("builtin scenario data is valid"))
        .collect()
}

pub fn builtin(name: &str) -> Result<Scenario> {
    let seg = Segment::new;
    let unit_boundary = vec![seg(None, 1.0, 1.0)];
    let all = vec![
        OutputKind::Field,
        OutputKind::Atoms,
        OutputKind::Shocks,
        OutputKind::Report,
    ];
    let tol = Tolerances::default();
    match name {
        "raref-delta" => Scenario::assemble(
            Some(name.into()),
            vec![seg(Some(2.0), 1.0, 2.0), seg(None, 1.0, -2.0)],
            unit_boundary,
            DEFAULT_EPS_FLOOR,
            XGrid {
                from: 0.0,
                to: 4.0,
                count: 401,
            },
            vec![0.25, 0.5, 1.0, 1.5, 3.0, 6.0],
            tol,
            all,
            (0.25, 8.0),
        ),
        "boundary-takeoff" => Scenario::assemble(
            Some(name.into()),
            vec![seg(Some(2.0), 1.0, -2.0), seg(None, 0.0, 0.0)],
            unit_boundary,
            1e-4,
            XGrid {
                from: 0.0,
                to: 6.0,
                count: 301,
            },
            vec![0.5, 1.0, 2.0, 4.0, 8.0, 10.0],
            tol,
            all,
            (0.25, 12.0),
        ),
        "two-deltas" => Scenario::assemble(
            Some(name.into()),
            vec![seg(Some(2.0), 1.0, 1.0), seg(None, 1.0, -2.0)],
            vec![seg(Some(1.0), 1.0, 1.0), seg(None, 1.0, 2.0)],
            DEFAULT_EPS_FLOOR,
            XGrid {
                from: 0.0,
                to: 3.0,
                count: 301,
            },
            vec![0.5, 1.5, 2.0, 4.0],
            tol,
            all,
            (0.25, 6.0),
        ),
        _ => Err(Error::UnknownScenario { name: name.into() }),
    }
}

/// Loads a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario_str(&text)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<f64>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| schema(format!("{path}.{key}"), "expected a number")),
    }
}

fn segments(root: &Map<String, Value>, key: &str) -> Result<Vec<Segment>> {
    let list = root
        .get(key)
        .ok_or_else(|| schema(key, "missing"))?
        .as_array()
        .ok_or_else(|| schema(key, "expected an array of segments"))?;
    if list.is_empty() {
        return Err(schema(key, "at least one segment required"));
    }
    list.iter()
        .enumerate()
        .map(|(i, v)| {
            let path = format!("{key}[{i}]");
            let obj = v.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
            for k in obj.keys() {
                if !matches!(k.as_str(), "end" | "rho" | "u") {
                    return Err(schema(format!("{path}.{k}"), "unknown field"));
                }
            }
            if !obj.contains_key("end") {
                return Err(schema(format!("{path}.end"), "missing (use null for +inf)"));
            }
            let end = number(obj, "end", &path)?;
            let rho = number(obj, "rho", &path)?.ok_or_else(|| schema(format!("{path}.rho"), "missing"))?;
            let u = number(obj, "u", &path)?.ok_or_else(|| schema(format!("{path}.u"), "missing"))?;
            Ok(Segment::new(end, rho, u))
        })
        .collect()
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    let root = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    const KNOWN: [&str; 10] = [
        "name",
        "initial",
        "boundary",
        "eps_floor",
        "tol_eq",
        "quad_rel_tol",
        "x",
        "t",
        "outputs",
        "horizon",
    ];
    if let Some(k) = root.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(schema(k.as_str(), "unknown field"));
    }
    let name = match root.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema("name", "expected a string")),
    };
    let initial = segments(root, "initial")?;
    let boundary = segments(root, "boundary")?;
    let eps_floor = number(root, "eps_floor", "$")?.unwrap_or(DEFAULT_EPS_FLOOR);
    if !(eps_floor > 0.0) {
        return Err(schema("eps_floor", "must be positive"));
    }
    let mut tol = Tolerances::default();
    if let Some(v) = number(root, "tol_eq", "$")? {
        if !(v > 0.0) {
            return Err(schema("tol_eq", "must be positive"));
        }
        tol.eq_rel = v;
    }
    if let Some(v) = number(root, "quad_rel_tol", "$")? {
        if !(v > 0.0) {
            return Err(schema("quad_rel_tol", "must be positive"));
        }
        tol.quad_rel = v;
    }
    let x_grid = match root.get("x") {
        None | Some(Value::Null) => XGrid {
            from: 0.0,
            to: 4.0,
            count: 401,
        },
        Some(Value::Object(o)) => {
            let from = number(o, "from", "x")?.unwrap_or(0.0);
            let to = number(o, "to", "x")?.ok_or_else(|| schema("x.to", "missing"))?;
            let count = o
                .get("count")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema("x.count", "expected a positive integer"))? as usize;
            if count == 0 || !(to >= from) || from < 0.0 {
                return Err(schema("x", "need 0 <= from <= to and count >= 1"));
            }
            XGrid { from, to, count }
        }
        Some(_) => return Err(schema("x", "expected {from, to, count}")),
    };
    let t_list = match root.get("t") {
        None | Some(Value::Null) => vec![0.5],
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, v)| match v.as_f64() {
                Some(t) if t > 0.0 => Ok(t),
                _ => Err(schema(format!("t[{i}]"), "expected a positive number")),
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(schema("t", "expected an array of times")),
    };
    if t_list.is_empty() {
        return Err(schema("t", "at least one time required"));
    }
    let outputs = match root.get("outputs") {
        None | Some(Value::Null) => vec![OutputKind::Field, OutputKind::Atoms],
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .and_then(OutputKind::parse)
                    .ok_or_else(|| schema(format!("outputs[{i}]"), "expected field|atoms|shocks|trace|report"))
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(schema("outputs", "expected an array")),
    };
    let horizon = match root.get("horizon") {
        None | Some(Value::Null) => {
            let last = t_list.iter().copied().fold(0.0, f64::max);
            (t_list.iter().copied().fold(f64::INFINITY, f64::min), last)
        }
        Some(Value::Array(a)) if a.len() == 2 => {
            let lo = a[0].as_f64().ok_or_else(|| schema("horizon[0]", "expected a number"))?;
            let hi = a[1].as_f64().ok_or_else(|| schema("horizon[1]", "expected a number"))?;
            if !(lo > 0.0 && hi >= lo) {
                return Err(schema("horizon", "need 0 < start <= end"));
            }
            (lo, hi)
        }
        Some(_) => return Err(schema("horizon", "expected [start, end]")),
    };
    Scenario::assemble(
        name, initial, boundary, eps_floor, x_grid, t_list, tol, outputs, horizon,
    )
}
