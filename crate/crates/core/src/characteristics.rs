//! Generalized characteristics, interface interval, shock location and tracing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{one_sided_limit, LIMIT_STEP};
use crate::potentials::{Branch, RegimeTag};
use crate::problem::{check_nonneg, check_time, Problem};
use crate::slice::Jump;

const BISECT_ITERS: usize = 200;

/// Which data axis fed an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShockSource {
    Initial,
    Boundary,
    Mixed,
}

impl ShockSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ShockSource::Initial => "initial",
            ShockSource::Boundary => "boundary",
            ShockSource::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShockPoint {
    pub x: f64,
    pub t: f64,
    pub mass: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub u_shock: f64,
    pub source: ShockSource,
    pub at_boundary: bool,
}

/// `I(t) = {x : F(x, t) = G(x, t)}`; `None` when `F < G` everywhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceInterval {
    pub t: f64,
    pub bounds: Option<(f64, f64)>,
}

impl InterfaceInterval {
    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn is_point(&self, tol: f64) -> bool {
        self.bounds.is_some_and(|(l, r)| r - l <= tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathEnd {
    Horizon,
    Absorbed,
    Merged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShockPath {
    pub points: Vec<ShockPoint>,
    pub end: PathEnd,
    /// Time at which the atom reached `x = 0`, if it did.
    pub absorbed_at: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MergeEvent {
    pub t: f64,
    pub x: f64,
    /// Index of the surviving path.
    pub into: usize,
    /// Index of the path that ended.
    pub from: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShockTrack {
    pub paths: Vec<ShockPath>,
    pub merges: Vec<MergeEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryEventKind {
    /// An interior atom reached the wall and a boundary atom formed.
    Absorption,
    /// The boundary atom left the wall.
    Departure,
}

impl BoundaryEventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryEventKind::Absorption => "absorption",
            BoundaryEventKind::Departure => "departure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryEvent {
    pub t: f64,
    pub kind: BoundaryEventKind,
    /// Boundary atom mass on the side of the event where it exists.
    pub mass: f64,
}

fn source_of(j: &Jump) -> ShockSource {
    match (
        j.initial_pre.is_some_and(|(a, b)| b > a),
        j.boundary_pre.is_some_and(|(a, b)| b > a),
    ) {
        (true, false) => ShockSource::Initial,
        (false, true) => ShockSource::Boundary,
        _ => ShockSource::Mixed,
    }
}

/// Smallest `x` in `(lo, hi]` with `pred(x)`, given `!pred(lo)` and `pred(hi)`.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..BISECT_ITERS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

impl Problem {
    fn x_tol(&self, t: f64) -> f64 {
        1e-13 * self.length_scale(t)
    }

    /// A point where `F < G` strictly.
    fn far_point(&self, t: f64) -> f64 {
        let mut hi = self.length_scale(t);
        for _ in 0..64 {
            let s = self.state(hi, t);
            if s.f.value < s.g.value {
                break;
            }
            hi *= 2.0;
        }
        hi
    }

    pub(crate) fn interface_bounds(&self, t: f64) -> Option<(f64, f64)> {
        let s0 = self.state(0.0, t);
        if s0.f.value < s0.g.value {
            return None;
        }
        let hi = self.far_point(t);
        let tol = self.x_tol(t);
        let le = |x: f64| {
            let s = self.state(x, t);
            s.f.value <= s.g.value
        };
        let l = if le(0.0) { 0.0 } else { bisect(0.0, hi, tol, le) };
        let r = bisect(l, hi, tol, |x| {
            let s = self.state(x, t);
            s.f.value < s.g.value
        });
        Some((l, r.max(l)))
    }

    pub fn locate_interface_interval(&self, t: f64) -> Result<InterfaceInterval> {
        check_time(t)?;
        Ok(InterfaceInterval {
            t,
            bounds: self.interface_bounds(t),
        })
    }

    /// `X(η, t)`: the position at time `t` of the characteristic from `(η, 0)`.
    pub fn forward_characteristic_x(&self, eta: f64, t: f64) -> Result<f64> {
        let (lo, hi) = self.characteristic_bracket_x(eta, t)?;
        if hi - lo > 1e-9 * self.length_scale(t) {
            return Err(Error::ExceptionalPoint { lo, hi });
        }
        Ok(hi)
    }

    /// `(a⁻, a⁺)`; the two differ only when `η` is the center of a fan.
    pub fn characteristic_bracket_x(&self, eta: f64, t: f64) -> Result<(f64, f64)> {
        check_nonneg("eta", eta)?;
        check_time(t)?;
        let tol = self.x_tol(t);
        let beyond = |x: f64| {
            let s = self.state(x, t);
            x > 0.0 && s.initial_side() && s.f.arg_lo > eta
        };
        let mut hi = eta + t * self.initial.sup_abs_velocity() + 1.0;
        for _ in 0..64 {
            if beyond(hi) {
                break;
            }
            hi *= 2.0;
        }
        let a_plus = if beyond(tol) { 0.0 } else { bisect(0.0, hi, tol, beyond) };
        let k = self.initial.segment_at(eta);
        if self.initial.start(k) != eta || a_plus == 0.0 {
            return Ok((a_plus, a_plus));
        }
        let in_fan = |x: f64| {
            let s = self.state(x, t);
            s.initial_side() && s.f.branch_lo == Branch::Breakpoint(k) && s.f.arg_lo == eta
        };
        let probe = a_plus - 1e-7 * self.length_scale(t);
        if probe <= 0.0 || !in_fan(probe) {
            return Ok((a_plus, a_plus));
        }
        let a_minus = if in_fan(0.0) {
            0.0
        } else {
            bisect(0.0, probe, tol, in_fan)
        };
        Ok((a_minus, a_plus))
    }

    /// `Y(ξ, t)`: the position at time `t` of the characteristic entering at `(0, ξ)`.
    pub fn forward_characteristic_y(&self, xi: f64, t: f64) -> Result<f64> {
        let (lo, hi) = self.characteristic_bracket_y(xi, t)?;
        if hi - lo > 1e-9 * self.length_scale(t) {
            return Err(Error::ExceptionalPoint { lo, hi });
        }
        Ok(lo)
    }

    /// `(b⁺, b⁻)` with `b⁻` the mirror infimum; they differ only at fan centers.
    pub fn characteristic_bracket_y(&self, xi: f64, t: f64) -> Result<(f64, f64)> {
        check_nonneg("xi", xi)?;
        check_time(t)?;
        if xi >= t {
            return Err(Error::OutOfRange { name: "xi", value: xi });
        }
        let tol = self.x_tol(t);
        let behind = |x: f64| {
            let s = self.state(x, t);
            s.f.value >= s.g.value && s.g.arg_lo > xi
        };
        let s0 = self.state(0.0, t);
        if s0.f.value < s0.g.value {
            return Ok((0.0, 0.0));
        }
        let hi = t * self.boundary.sup_velocity() + 1.0;
        let first_false = bisect(0.0, hi, tol, |x| !behind(x));
        let b_plus = first_false;
        let k = self.boundary.segment_at(xi);
        if self.boundary.start(k) != xi {
            return Ok((b_plus, b_plus));
        }
        let in_fan = |x: f64| {
            let s = self.state(x, t);
            s.f.value >= s.g.value && s.g.branch_lo == Branch::Breakpoint(k) && s.g.arg_lo == xi
        };
        let probe = b_plus + 1e-7 * self.length_scale(t);
        if !in_fan(probe) {
            return Ok((b_plus, b_plus));
        }
        let far = self.far_point(t).max(probe);
        let b_minus = bisect(probe, far, tol, |x| !in_fan(x));
        Ok((b_plus, b_minus))
    }

    /// Right-derivative of the characteristic curves through `(x, t)`.
    pub fn characteristic_speed(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        let s = self.state(x, t);
        let (p, b) = (&self.initial, &self.boundary);
        let combined = |y: f64, tau: f64| {
            let num = p.moment(y, 1, 0) + b.moment(tau, 2, 0);
            let den = p.moment(y, 0, 0) + b.moment(tau, 1, 0);
            num / den
        };
        let tag = self.regime_of(&s).tag;
        if x == 0.0 {
            return Ok(match tag {
                RegimeTag::BoundaryDominated => b.value_at(t).1,
                RegimeTag::InitialDominated => 0.0,
                RegimeTag::Interface => combined(s.f.arg_hi, t),
            });
        }
        Ok(match tag {
            RegimeTag::InitialDominated if s.f.is_unique() => (x - s.f.arg_lo) / t,
            RegimeTag::InitialDominated => {
                p.moment_between(s.f.arg_lo, s.f.arg_hi, 1, 0) / p.moment_between(s.f.arg_lo, s.f.arg_hi, 0, 0)
            }
            RegimeTag::BoundaryDominated if s.g.is_unique() => x / (t - s.g.arg_lo),
            RegimeTag::BoundaryDominated => {
                b.moment_between(s.g.arg_lo, s.g.arg_hi, 2, 0) / b.moment_between(s.g.arg_lo, s.g.arg_hi, 1, 0)
            }
            RegimeTag::Interface if s.f.arg_hi == 0.0 && s.g.arg_hi == 0.0 => x / t,
            RegimeTag::Interface => combined(s.f.arg_hi, s.g.arg_hi),
        })
    }

    /// Atoms of `ρ(·, t)` in `[x_lo, x_hi]`, including the boundary atom when `x_lo = 0`.
    pub fn locate_shocks(&self, t: f64, window: (f64, f64), scan_n: usize) -> Result<Vec<ShockPoint>> {
        check_time(t)?;
        let (lo, hi) = window;
        check_nonneg("x_lo", lo)?;
        if !(hi >= lo) {
            return Err(Error::OutOfRange {
                name: "x_hi",
                value: hi,
            });
        }
        if scan_n < 2 {
            return Err(Error::WindowTooCoarse {
                reason: format!("scan_n = {scan_n} < 2"),
            });
        }
        let slice = self.scan_slice(t, lo, hi, scan_n);
        let features = slice.feature_points();
        Ok(slice.jumps.iter().map(|j| self.shock_point(t, j, &features)).collect())
    }

    pub(crate) fn shock_point(&self, t: f64, j: &Jump, features: &[f64]) -> ShockPoint {
        let source = source_of(j);
        let gap = |dir: f64| {
            let edge = if dir < 0.0 { j.cell.0 } else { j.cell.1 };
            features
                .iter()
                .map(|&f| (f - edge) * dir)
                .filter(|&d| d > 1e-9)
                .fold(f64::INFINITY, f64::min)
        };
        let u = |x: f64| self.velocity_at(&self.state(x, t));
        let h_right = LIMIT_STEP.min(0.25 * gap(1.0));
        let u_right = one_sided_limit(u, j.cell.1, 1.0, h_right);
        let u_left = if j.at_boundary {
            j.velocity
        } else {
            let h_left = LIMIT_STEP.min(0.25 * gap(-1.0)).min(0.5 * j.cell.0);
            one_sided_limit(u, j.cell.0, -1.0, h_left)
        };
        ShockPoint {
            x: j.x,
            t,
            mass: j.mass,
            u_left,
            u_right,
            u_shock: j.velocity,
            source,
            at_boundary: j.at_boundary,
        }
    }

    /// Interior atoms in a window, with cheap side data (no limits).
    fn relocate(&self, t: f64, lo: f64, hi: f64) -> Vec<Jump> {
        self.scan_slice(t, lo, hi, 16)
            .jumps
            .into_iter()
            .filter(|j| !j.at_boundary)
            .collect()
    }

    fn trace_window(&self, dt: f64) -> f64 {
        let (a, b) = self.velocity_hull();
        5.0 * dt * (b - a).max(1.0)
    }

    /// Whether a boundary atom sits at `x = 0` at time `t`.
    pub(crate) fn wall_holds(&self, t: f64) -> bool {
        t > 0.0 && self.state(0.0, t).initial_side()
    }

    fn point_from(&self, t: f64, j: &Jump) -> ShockPoint {
        ShockPoint {
            x: j.x,
            t,
            mass: j.mass,
            u_left: f64::NAN,
            u_right: f64::NAN,
            u_shock: j.velocity,
            source: source_of(j),
            at_boundary: j.at_boundary,
        }
    }

    /// Continues one atom from `seed` to `t_end` by relocation in a moving window.
    pub fn trace_shock_path(&self, seed: &ShockPoint, t_end: f64, dt: f64) -> Result<ShockPath> {
        let track = self.trace_shock_paths(std::slice::from_ref(seed), t_end, dt)?;
        Ok(track.paths.into_iter().next().expect("one seed gives one path"))
    }

    /// Traces several atoms at once and records where they merge.
    pub fn trace_shock_paths(&self, seeds: &[ShockPoint], t_end: f64, dt: f64) -> Result<ShockTrack> {
        let t0 = seeds.first().map_or(t_end, |s| s.t);
        self.trace_from(seeds, t0, t_end, dt, None)
    }

    /// Follows every interior atom over `[t0, t1]`, picking up atoms that
    /// appear later by a full scan every `rescan_every` steps.
    pub fn track_shocks(&self, t0: f64, t1: f64, dt: f64, rescan_every: usize) -> Result<ShockTrack> {
        check_time(t0)?;
        let seeds: Vec<ShockPoint> = self
            .locate_shocks(t0, (0.0, self.length_scale(t0)), 64)?
            .into_iter()
            .filter(|s| !s.at_boundary)
            .collect();
        self.trace_from(&seeds, t0, t1, dt, Some(rescan_every.max(1)))
    }

    fn trace_from(
        &self,
        seeds: &[ShockPoint],
        t0: f64,
        t_end: f64,
        dt: f64,
        rescan: Option<usize>,
    ) -> Result<ShockTrack> {
        if !(dt > 0.0) {
            return Err(Error::OutOfRange { name: "dt", value: dt });
        }
        check_time(t0)?;
        if let Some(s) = seeds.iter().find(|s| s.t != t0) {
            return Err(Error::OutOfRange {
                name: "seed.t",
                value: s.t,
            });
        }
        let half = self.trace_window(dt);
        let mut paths: Vec<ShockPath> = seeds
            .iter()
            .map(|s| ShockPath {
                points: vec![*s],
                end: PathEnd::Horizon,
                absorbed_at: None,
            })
            .collect();
        let mut active: Vec<bool> = vec![true; seeds.len()];
        let mut merges = Vec::new();
        let mut t = t0;
        let mut step = 0usize;
        while t < t_end && (rescan.is_some() || active.iter().any(|&a| a)) {
            step += 1;
            let t_next = (t + dt).min(t_end);
            let t_next = if t_end - t_next < 1e-9 * dt { t_end } else { t_next };
            let mut located: Vec<Option<Jump>> = vec![None; paths.len()];
            for i in 0..paths.len() {
                if !active[i] {
                    continue;
                }
                let cur = *paths[i].points.last().unwrap();
                let pred = cur.x + cur.u_shock * (t_next - cur.t);
                let lo = (pred - half).max(0.0);
                let hi = (pred + half).max(lo + half);
                let found = self.relocate(t_next, lo, hi);
                match found
                    .into_iter()
                    .min_by(|a, b| (a.x - pred).abs().total_cmp(&(b.x - pred).abs()))
                {
                    Some(j) => located[i] = Some(j),
                    None if lo == 0.0 && self.wall_holds(t_next) => {
                        let t_abs = bisect(t, t_next, 1e-14 * t_next.max(1.0), |s| self.wall_holds(s));
                        let mass = self.boundary_jump(t_abs).map_or(cur.mass, |j| j.mass);
                        let mut p = cur;
                        p.x = 0.0;
                        p.t = t_abs;
                        p.mass = mass;
                        p.at_boundary = true;
                        paths[i].points.push(p);
                        paths[i].end = PathEnd::Absorbed;
                        paths[i].absorbed_at = Some(t_abs);
                        active[i] = false;
                    }
                    None => return Err(Error::PathLost { t: t_next }),
                }
            }
            for i in 0..paths.len() {
                let Some(ji) = located[i].clone() else { continue };
                for k in 0..i {
                    let Some(jk) = located[k].as_ref() else { continue };
                    if (jk.x - ji.x).abs() < 1e-8 {
                        let (t_m, x_m) = self.refine_merge(&paths[k], &paths[i], t, t_next, half);
                        merges.push(MergeEvent {
                            t: t_m,
                            x: x_m,
                            into: k,
                            from: i,
                        });
                        let mut last = self.point_from(t_m, &ji);
                        last.x = x_m;
                        paths[i].points.push(last);
                        paths[i].end = PathEnd::Merged;
                        active[i] = false;
                        located[i] = None;
                        break;
                    }
                }
            }
            for i in 0..paths.len() {
                if let Some(j) = located[i].take() {
                    paths[i].points.push(self.point_from(t_next, &j));
                }
            }
            if rescan.is_some_and(|r| step.is_multiple_of(r)) {
                for j in self.relocate(t_next, 0.0, self.length_scale(t_next)) {
                    let known =
                        (0..paths.len()).any(|i| active[i] && (paths[i].points.last().unwrap().x - j.x).abs() <= half);
                    if !known {
                        paths.push(ShockPath {
                            points: vec![self.point_from(t_next, &j)],
                            end: PathEnd::Horizon,
                            absorbed_at: None,
                        });
                        active.push(true);
                    }
                }
            }
            t = t_next;
        }
        Ok(ShockTrack { paths, merges })
    }

    /// Merge time by bisection on the number of atoms between two paths.
    fn refine_merge(&self, a: &ShockPath, b: &ShockPath, t0: f64, t1: f64, half: f64) -> (f64, f64) {
        let (pa, pb) = (a.points.last().unwrap(), b.points.last().unwrap());
        let window = |t: f64| {
            let xa = pa.x + pa.u_shock * (t - pa.t);
            let xb = pb.x + pb.u_shock * (t - pb.t);
            ((xa.min(xb) - half).max(0.0), xa.max(xb) + half)
        };
        let single = |t: f64| {
            let (lo, hi) = window(t);
            self.relocate(t, lo, hi).len() < 2
        };
        let t_m = bisect(t0, t1, 1e-14 * t1.max(1.0), single);
        let (lo, hi) = window(t_m);
        let x_m = self.relocate(t_m, lo, hi).first().map_or(0.5 * (lo + hi), |j| j.x);
        (t_m, x_m)
    }

    /// Times in `[t0, t1]` where the boundary atom appears or leaves.
    pub fn boundary_events(&self, t0: f64, t1: f64, samples: usize) -> Result<Vec<BoundaryEvent>> {
        check_time(t0)?;
        if !(t1 >= t0) || samples < 2 {
            return Err(Error::OutOfRange { name: "t1", value: t1 });
        }
        let mut events = Vec::new();
        let step = (t1 - t0) / (samples - 1) as f64;
        let mut prev = (t0, self.wall_holds(t0));
        for i in 1..samples {
            let t = if i + 1 == samples { t1 } else { t0 + step * i as f64 };
            let cur = self.wall_holds(t);
            if cur != prev.1 {
                let tol = 1e-14 * t.max(1.0);
                let te = if cur {
                    bisect(prev.0, t, tol, |s| self.wall_holds(s))
                } else {
                    bisect(prev.0, t, tol, |s| !self.wall_holds(s))
                };
                let (kind, probe) = if cur {
                    (BoundaryEventKind::Absorption, te)
                } else {
                    (BoundaryEventKind::Departure, bisect(prev.0, te, tol, |s| s >= te) - tol)
                };
                let mass = self.boundary_jump(probe.max(prev.0)).map_or(0.0, |j| j.mass);
                events.push(BoundaryEvent { t: te, kind, mass });
            }
            prev = (t, cur);
        }
        Ok(events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;
    use approx::assert_abs_diff_eq;

    fn s1() -> Problem {
        builtin("raref-delta").unwrap().problem().unwrap()
    }

    #[test]
    fn characteristic_x_examples() {
        let p = s1();
        assert_abs_diff_eq!(p.forward_characteristic_x(1.0, 0.25).unwrap(), 1.5, epsilon = 1e-11);
        assert_abs_diff_eq!(p.forward_characteristic_x(3.0, 0.25).unwrap(), 2.5, epsilon = 1e-11);
        assert!(matches!(
            p.forward_characteristic_x(0.0, 0.5),
            Err(Error::ExceptionalPoint { .. })
        ));
        let (lo, hi) = p.characteristic_bracket_x(0.0, 0.5).unwrap();
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-11);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn characteristic_y_examples() {
        let p = s1();
        assert_abs_diff_eq!(p.forward_characteristic_y(0.5, 2.0).unwrap(), 1.5, epsilon = 1e-11);
        assert_abs_diff_eq!(p.forward_characteristic_y(0.2, 0.5).unwrap(), 0.3, epsilon = 1e-11);
        assert!(p.forward_characteristic_y(0.5 - 1e-9, 0.5).unwrap() < 1e-8);
        assert!(matches!(
            p.forward_characteristic_y(0.5, 0.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn speed_examples() {
        let p = s1();
        assert_abs_diff_eq!(p.characteristic_speed(2.0, 0.5).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.characteristic_speed(0.5, 2.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.characteristic_speed(1.5, 1.0).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn interface_examples() {
        let p = s1();
        let (l, r) = p.locate_interface_interval(0.5).unwrap().bounds.unwrap();
        assert_abs_diff_eq!(l, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);
        let (l, r) = p.locate_interface_interval(3.0).unwrap().bounds.unwrap();
        assert_abs_diff_eq!(l, 7.0 / 6.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r, 7.0 / 6.0, epsilon = 1e-9);
        assert!(p.locate_interface_interval(6.0).unwrap().is_empty());
    }

    #[test]
    fn locate_shock_examples() {
        let p = s1();
        let s = p.locate_shocks(1.5, (0.0, 4.0), 64).unwrap();
        assert_eq!(s.len(), 1);
        assert_abs_diff_eq!(s[0].x, -3.0 + 4.0 * 1.5f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(s[0].mass, 4.0 * 1.5f64.sqrt(), epsilon = 1e-9);
        assert_eq!(s[0].source, ShockSource::Initial);
        assert!(s[0].u_left > s[0].u_shock && s[0].u_shock > s[0].u_right);
        assert!(matches!(
            p.locate_shocks(1.0, (0.0, 4.0), 1),
            Err(Error::WindowTooCoarse { .. })
        ));
    }

    #[test]
    fn two_deltas_at_two() {
        let p = builtin("two-deltas").unwrap().problem().unwrap();
        let s = p.locate_shocks(2.0, (0.0, 4.0), 64).unwrap();
        assert_eq!(s.len(), 1);
        assert_abs_diff_eq!(s[0].x, 15.0 / 14.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s[0].mass, 7.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s[0].u_left, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(s[0].u_right, -2.0, epsilon = 1e-6);
    }

    #[test]
    fn boundary_events_raref() {
        let p = s1();
        let ev = p.boundary_events(0.25, 8.0, 64).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kind, BoundaryEventKind::Absorption);
        assert_abs_diff_eq!(ev[0].t, 16.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[0].mass, 16.0, epsilon = 1e-9);
    }
}
