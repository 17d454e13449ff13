//! Scenario-level validation run collecting diagnostics into one report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::characteristics::{BoundaryEvent, MergeEvent};
use crate::diagnostics::TestBump;
use crate::error::{Error, Result};
use crate::potentials::RegimeTag;
use crate::problem::Problem;
use crate::scenario::Scenario;

const SEED: u64 = 0x5eed;
const BALANCE_TOL: f64 = 1e-6;
const MU_TOL: f64 = 1e-6;
const TRACE_TOL: f64 = 1e-6;
const WEAK_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub inputs: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSummary {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub end_kind: crate::characteristics::PathEnd,
    pub mass_at_end: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub scenario: String,
    pub horizon: (f64, f64),
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub paths: Vec<PathSummary>,
    pub merges: Vec<MergeEvent>,
    pub boundary_events: Vec<BoundaryEvent>,
}

fn check(name: &str, inputs: Value, residual: f64, tolerance: f64, passed: bool) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        inputs,
        residual,
        tolerance,
        passed,
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Runs every diagnostic over the scenario horizon.
pub fn validate_scenario(scenario: &Scenario) -> Result<ValidationReport> {
    let p = scenario.problem()?;
    let (t0, t1) = scenario.horizon;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    let times = grid(t0, t1, 20);
    let x_max = 2.0 * p.length_scale(t1);

    for &t in &times {
        match p.mass_balance(t, x_max) {
            Ok(r) => checks.push(check(
                "mass_balance",
                json!({ "t": t, "x_max": x_max }),
                r.residual,
                BALANCE_TOL,
                r.holds(BALANCE_TOL),
            )),
            Err(Error::NonCompactScenario { .. }) => {
                let c = p.mu_identity_x(t, 0.0, x_max)?;
                checks.push(check(
                    "mass_window",
                    json!({ "t": t, "x1": 0.0, "x2": x_max }),
                    c.relative(),
                    MU_TOL,
                    c.relative() <= MU_TOL,
                ));
            }
            Err(e) => return Err(e),
        }
        match p.momentum_balance(t, x_max) {
            Ok(r) => {
                let name = if r.relation == crate::diagnostics::Relation::Equality {
                    "momentum_equality"
                } else {
                    "momentum_lower_bound"
                };
                checks.push(check(
                    name,
                    json!({ "t": t, "x_max": x_max }),
                    r.residual,
                    BALANCE_TOL,
                    r.holds(BALANCE_TOL),
                ));
            }
            Err(Error::NonCompactScenario { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    for &t in times.iter().step_by(2) {
        let r = p.entropy_report(t, (0.0, p.length_scale(t)), 200)?;
        let n = r.violations.len() as f64;
        checks.push(check(
            "entropy",
            json!({ "t": t, "checked": r.checked, "shocks": r.shocks }),
            n,
            0.0,
            n == 0.0,
        ));
    }

    for row in p.boundary_trace(&times)? {
        if row.regime == RegimeTag::BoundaryDominated {
            let d = (row.u_limit - row.u_b).abs();
            checks.push(check(
                "boundary_velocity",
                json!({ "t": row.t }),
                d,
                TRACE_TOL,
                d <= TRACE_TOL,
            ));
        }
    }

    for _ in 0..10 {
        let t = rng.gen_range(t0..t1);
        let xa = rng.gen_range(0.0..p.length_scale(t));
        let xb = rng.gen_range(0.0..p.length_scale(t));
        let c = p.mu_identity_x(t, xa.min(xb), xa.max(xb))?;
        checks.push(check(
            "mu_space",
            json!({ "t": t, "x1": c.a, "x2": c.b }),
            c.relative(),
            MU_TOL,
            c.relative() <= MU_TOL,
        ));
        let x = rng.gen_range(0.0..p.length_scale(t1));
        let ta = rng.gen_range(t0..t1);
        let tb = rng.gen_range(t0..t1);
        let c = p.mu_identity_t(x, ta.min(tb), ta.max(tb))?;
        checks.push(check(
            "mu_time",
            json!({ "x": x, "t1": c.a, "t2": c.b }),
            c.relative(),
            MU_TOL,
            c.relative() <= MU_TOL,
        ));
    }

    for _ in 0..2 {
        let bump = random_bump(&p, &mut rng, (t0, t1))?;
        let r = p.weak_residual(&bump, 128)?;
        checks.push(check(
            "weak_residual",
            serde_json::to_value(bump).unwrap_or(Value::Null),
            r.max_abs(),
            WEAK_TOL,
            r.max_abs() <= WEAK_TOL,
        ));
    }

    let track = p.track_shocks(t0, t1, (t1 - t0) / 800.0, 4)?;
    let paths = track
        .paths
        .iter()
        .map(|path| {
            let (a, b) = (path.points[0], *path.points.last().unwrap());
            PathSummary {
                start: (a.t, a.x),
                end: (b.t, b.x),
                end_kind: path.end,
                mass_at_end: b.mass,
            }
        })
        .collect();
    let boundary_events = p.boundary_events(t0, t1, 200)?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidationReport {
        scenario: scenario.display_name().to_string(),
        horizon: (t0, t1),
        passed,
        checks,
        paths,
        merges: track.merges,
        boundary_events,
    })
}

/// A bump inside the open quadrant within the horizon.
pub fn random_bump(p: &Problem, rng: &mut impl Rng, horizon: (f64, f64)) -> Result<TestBump> {
    let (t0, t1) = horizon;
    let tc = rng.gen_range(t0..t1);
    let th = rng.gen_range(0.05..0.5f64).min(tc - 0.5 * t0).max(0.01);
    let xc = rng.gen_range(0.2..p.length_scale(tc).max(1.0));
    let xh = rng.gen_range(0.05..1.0f64).min(0.9 * xc);
    TestBump::new(xc - xh, xc + xh, tc - th, tc + th)
}
