//! Checks on a computed solution: budgets, entropy, traces, `μ` and `H`
//! identities, weak-form residuals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{one_sided_limit, LIMIT_STEP};
use crate::potentials::RegimeTag;
use crate::problem::{check_nonneg, check_time, Problem};
use crate::quadrature::{integrate, integrate_pieces, GaussRule};
use crate::slice::Slice;

/// How a budget compares with its expected value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equality,
    /// `total ≥ expected`.
    AtLeast,
    /// `total ≤ expected`.
    AtMost,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BalanceReport {
    pub t: f64,
    pub total: f64,
    pub expected: f64,
    pub residual: f64,
    pub relation: Relation,
}

impl BalanceReport {
    fn new(t: f64, total: f64, expected: f64, relation: Relation) -> Self {
        Self {
            t,
            total,
            expected,
            residual: total - expected,
            relation,
        }
    }

    /// Whether the relation holds to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        match self.relation {
            Relation::Equality => self.residual.abs() <= tol,
            Relation::AtLeast => self.residual >= -tol,
            Relation::AtMost => self.residual <= tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyViolation {
    pub x: f64,
    pub u_left: f64,
    pub u_mid: f64,
    pub u_right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub t: f64,
    pub checked: usize,
    pub shocks: usize,
    pub violations: Vec<EntropyViolation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryTraceRow {
    pub t: f64,
    pub regime: RegimeTag,
    pub u_limit: f64,
    pub u_b: f64,
    pub atom_mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InitialTraceRow {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub u_target: f64,
    pub m: f64,
    pub m_target: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuAxis {
    /// `∫ m dx` over `[a, b]` at fixed `t`.
    Space,
    /// `∫ q dt` over `[a, b]` at fixed `x`.
    Time,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuIdentityCheck {
    pub axis: MuAxis,
    pub a: f64,
    pub b: f64,
    /// The fixed coordinate.
    pub at: f64,
    pub integral: f64,
    pub expected: f64,
    pub residual: f64,
}

impl MuIdentityCheck {
    /// Residual relative to `1 + |expected|`.
    pub fn relative(&self) -> f64 {
        self.residual.abs() / (1.0 + self.expected.abs())
    }
}

/// Tensor bump `b(s)·b(r)` with `b(s) = (1 − s²)³` on a rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestBump {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl TestBump {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        check_nonneg("x_lo", x_lo)?;
        check_nonneg("t_lo", t_lo)?;
        if !(x_lo > 0.0 && x_hi > x_lo) {
            return Err(Error::OutOfRange {
                name: "x_hi",
                value: x_hi,
            });
        }
        if !(t_lo > 0.0 && t_hi > t_lo) {
            return Err(Error::OutOfRange {
                name: "t_hi",
                value: t_hi,
            });
        }
        Ok(Self { x_lo, x_hi, t_lo, t_hi })
    }

    fn profile(s: f64) -> (f64, f64) {
        if s.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let w = 1.0 - s * s;
        (w * w * w, -6.0 * s * w * w)
    }

    /// `(φ, φ_x, φ_t)` at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let (xc, xh) = (0.5 * (self.x_lo + self.x_hi), 0.5 * (self.x_hi - self.x_lo));
        let (tc, th) = (0.5 * (self.t_lo + self.t_hi), 0.5 * (self.t_hi - self.t_lo));
        let (bx, dbx) = Self::profile((x - xc) / xh);
        let (bt, dbt) = Self::profile((t - tc) / th);
        (bx * bt, dbx * bt / xh, bx * dbt / th)
    }
}

/// The two weak-form integrals for one test function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakResidual {
    /// `∬ φ_t m dx dt − ∬ φ u dm dt`.
    pub r1: f64,
    /// `∬ (φ_t u + φ_x u²) dm dt`.
    pub r2: f64,
}

impl WeakResidual {
    pub fn max_abs(&self) -> f64 {
        self.r1.abs().max(self.r2.abs())
    }
}

const X_GAUSS: usize = 10;
const WEAK_SCAN: usize = 16;

impl Problem {
    /// Total mass against the initial mass plus the influx up to `t`.
    pub fn mass_balance(&self, t: f64, x_max: f64) -> Result<BalanceReport> {
        self.check_compact(x_max)?;
        let p = &self.initial;
        let expected = p.moment(x_max, 0, 0) + self.boundary.moment(t, 1, 0);
        if t == 0.0 {
            return Ok(BalanceReport::new(
                t,
                p.moment(x_max, 0, 0),
                expected,
                Relation::Equality,
            ));
        }
        check_time(t)?;
        let total = self.m_at(&self.state(x_max, t)) - self.m_at(&self.state(0.0, t));
        Ok(BalanceReport::new(t, total, expected, Relation::Equality))
    }

    /// Total momentum: equality while the wall holds no atom, a lower bound otherwise.
    pub fn momentum_balance(&self, t: f64, x_max: f64) -> Result<BalanceReport> {
        self.check_compact(x_max)?;
        let p = &self.initial;
        let p0 = p.moment(x_max, 1, 0);
        if t == 0.0 {
            return Ok(BalanceReport::new(t, p0, p0, Relation::Equality));
        }
        check_time(t)?;
        let influx = self.boundary.moment(t, 2, 0);
        let s0 = self.state(0.0, t);
        let free = self.q_at(&self.state(x_max, t)) - self.q_right(&s0);
        if s0.f.value >= s0.g.value {
            let atom = if s0.f.value == s0.g.value {
                self.boundary_jump(t).map_or(0.0, |j| j.momentum)
            } else {
                0.0
            };
            Ok(BalanceReport::new(t, free + atom, p0 + influx, Relation::Equality))
        } else {
            Ok(BalanceReport::new(t, free, p0 - influx, Relation::AtLeast))
        }
    }

    fn check_compact(&self, x_max: f64) -> Result<()> {
        check_nonneg("x_max", x_max)?;
        let p = &self.initial;
        let cutoff = (0..p.len()).map(|j| p.start(j)).find(|&s| p.is_floor_beyond(s));
        match cutoff {
            Some(c) if c < x_max && p.sup_abs_velocity_beyond(c) == 0.0 => Ok(()),
            _ => Err(Error::NonCompactScenario { x_max }),
        }
    }

    /// One-sided velocity limits at `x`, with steps kept inside the smooth pieces.
    fn side_limits(&self, t: f64, x: f64, features: &[f64]) -> (f64, f64) {
        let gap = |dir: f64| {
            features
                .iter()
                .map(|&f| (f - x) * dir)
                .filter(|&d| d > 1e-9)
                .fold(f64::INFINITY, f64::min)
        };
        let u = |z: f64| self.velocity_at(&self.state(z, t));
        let right = one_sided_limit(u, x, 1.0, LIMIT_STEP.min(0.25 * gap(1.0)));
        let left = if x > 0.0 {
            one_sided_limit(u, x, -1.0, LIMIT_STEP.min(0.25 * gap(-1.0)).min(0.5 * x))
        } else {
            u(0.0)
        };
        (left, right)
    }

    /// Entropy check at every atom and at `n_samples` points of `window`.
    pub fn entropy_report(&self, t: f64, window: (f64, f64), n_samples: usize) -> Result<EntropyReport> {
        check_time(t)?;
        let (lo, hi) = window;
        check_nonneg("x_lo", lo)?;
        let shocks = self.locate_shocks(t, window, 64.max(n_samples.min(1024)))?;
        let slice = self.scan_slice(t, lo, hi, 64);
        let features = slice.feature_points();
        let mut violations = Vec::new();
        let cont_tol = 1e-6 * (1.0 + self.speed_scale());
        for s in &shocks {
            let ok = if s.at_boundary {
                s.u_left > s.u_right || (s.u_left - s.u_right).abs() <= cont_tol
            } else {
                s.u_left > s.u_shock && s.u_shock > s.u_right
            };
            if !ok {
                violations.push(EntropyViolation {
                    x: s.x,
                    u_left: s.u_left,
                    u_mid: s.u_shock,
                    u_right: s.u_right,
                });
            }
        }
        let mut checked = shocks.len();
        for i in 0..n_samples {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / n_samples as f64;
            if x <= 0.0 || features.iter().any(|&f| (f - x).abs() < 1e-9) {
                continue;
            }
            checked += 1;
            let (ul, ur) = self.side_limits(t, x, &features);
            let um = self.velocity_at(&self.state(x, t));
            let continuous = (ul - ur).abs() <= cont_tol;
            if !(continuous || (ul > um && um > ur)) {
                violations.push(EntropyViolation {
                    x,
                    u_left: ul,
                    u_mid: um,
                    u_right: ur,
                });
            }
        }
        Ok(EntropyReport {
            t,
            checked,
            shocks: shocks.len(),
            violations,
        })
    }

    /// `u(0⁺, t)`, `u_b(t)` and the wall atom mass on a time grid.
    pub fn boundary_trace(&self, t_grid: &[f64]) -> Result<Vec<BoundaryTraceRow>> {
        t_grid
            .iter()
            .map(|&t| {
                check_time(t)?;
                let s0 = self.state(0.0, t);
                let reach = self.length_scale(t);
                let slice = self.scan_slice(t, 0.0, reach.min(1.0), 32);
                let features = slice.feature_points();
                let (_, u_limit) = self.side_limits(t, 0.0, &features);
                let atom_mass = if s0.initial_side() {
                    self.m_right(&s0) - self.m_at(&s0)
                } else {
                    0.0
                };
                Ok(BoundaryTraceRow {
                    t,
                    regime: self.regime_of(&s0).tag,
                    u_limit,
                    u_b: self.boundary.value_at(t).1,
                    atom_mass,
                })
            })
            .collect()
    }

    /// `u` and `m` at a small time against `u₀` and `M₀`.
    pub fn initial_trace(&self, x_grid: &[f64], t_small: f64) -> Result<Vec<InitialTraceRow>> {
        check_time(t_small)?;
        x_grid
            .iter()
            .map(|&x| {
                check_nonneg("x", x)?;
                let s = self.state(x, t_small);
                Ok(InitialTraceRow {
                    x,
                    t: t_small,
                    u: self.velocity_at(&s),
                    u_target: self.initial.value_at(x).1,
                    m: self.m_at(&s),
                    m_target: self.initial.moment(x, 0, 0),
                })
            })
            .collect()
    }

    /// `H(x, t)` with `H_x = −q` and `H_t = 2E`.
    pub fn second_potential_h(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        let slice = self.covering_slice(x, t);
        Ok(self.h_with(&slice, &self.state(x, t)))
    }

    /// `∫_{x₁}^{x₂} m dx` against `μ(x₁, t) − μ(x₂, t)`.
    pub fn mu_identity_x(&self, t: f64, x1: f64, x2: f64) -> Result<MuIdentityCheck> {
        check_time(t)?;
        check_nonneg("x1", x1)?;
        if !(x2 >= x1) {
            return Err(Error::OutOfRange { name: "x2", value: x2 });
        }
        let slice = self.scan_slice(t, x1, x2, 64);
        let mut breaks = vec![x1];
        breaks.extend(slice.feature_points().into_iter().filter(|&f| f > x1 && f < x2));
        breaks.push(x2);
        let tol = self.tolerances().quad_rel;
        let integral = integrate_pieces(|x| self.m_at(&self.state(x, t)), &breaks, tol, 1e-13)?;
        let expected = self.state(x1, t).mu() - self.state(x2, t).mu();
        Ok(MuIdentityCheck {
            axis: MuAxis::Space,
            a: x1,
            b: x2,
            at: t,
            integral,
            expected,
            residual: integral - expected,
        })
    }

    /// `∫_{t₁}^{t₂} q dt` against `μ(x, t₂) − μ(x, t₁)`.
    pub fn mu_identity_t(&self, x: f64, t1: f64, t2: f64) -> Result<MuIdentityCheck> {
        check_nonneg("x", x)?;
        check_time(t1)?;
        if !(t2 >= t1) {
            return Err(Error::OutOfRange { name: "t2", value: t2 });
        }
        let tol = self.tolerances().quad_rel;
        let integral = integrate(|t| self.q_at(&self.state(x, t)), t1, t2, tol, 1e-13)?;
        let expected = self.state(x, t2).mu() - self.state(x, t1).mu();
        Ok(MuIdentityCheck {
            axis: MuAxis::Time,
            a: t1,
            b: t2,
            at: x,
            integral,
            expected,
            residual: integral - expected,
        })
    }

    /// Weak-form integrals with `quad_n` time panels.
    pub fn weak_residual(&self, bump: &TestBump, quad_n: usize) -> Result<WeakResidual> {
        self.weak_residual_with(bump, quad_n, true)
    }

    /// As [`Problem::weak_residual`], optionally leaving the atoms out of `dm`.
    pub fn weak_residual_with(&self, bump: &TestBump, quad_n: usize, atoms: bool) -> Result<WeakResidual> {
        if quad_n == 0 {
            return Err(Error::OutOfRange {
                name: "quad_n",
                value: 0.0,
            });
        }
        let x_rule = GaussRule::new(X_GAUSS);
        let t_rule = GaussRule::new(2);
        let signature = |t: f64| {
            let s = self.scan_slice(t, bump.x_lo, bump.x_hi, WEAK_SCAN);
            (s.jumps.len(), s.transitions.len())
        };
        let mut panels = Vec::with_capacity(quad_n + 8);
        let h = (bump.t_hi - bump.t_lo) / quad_n as f64;
        let mut a = bump.t_lo;
        let mut sig_a = signature(a);
        for i in 1..=quad_n {
            let b = if i == quad_n {
                bump.t_hi
            } else {
                bump.t_lo + h * i as f64
            };
            let sig_b = signature(b);
            let mut lo = a;
            let mut sig_lo = sig_a;
            for _ in 0..16 {
                if sig_lo == sig_b {
                    break;
                }
                let te = crate::characteristics::bisect(lo, b, 1e-13 * b, |s| signature(s) != sig_lo);
                panels.push((lo, te));
                lo = te;
                sig_lo = signature(te);
            }
            panels.push((lo, b));
            a = b;
            sig_a = sig_b;
        }
        let mut r = WeakResidual { r1: 0.0, r2: 0.0 };
        for &(lo, hi) in &panels {
            if hi <= lo {
                continue;
            }
            for (t, w) in t_rule.points(lo, hi) {
                let slice = self.scan_slice(t, bump.x_lo, bump.x_hi, WEAK_SCAN);
                let (i1, i2) = self.weak_slice(bump, &slice, &x_rule, atoms);
                r.r1 += w * i1;
                r.r2 += w * i2;
            }
        }
        Ok(r)
    }

    fn weak_slice(&self, bump: &TestBump, slice: &Slice, rule: &GaussRule, atoms: bool) -> (f64, f64) {
        let t = slice.t;
        let mut breaks = vec![bump.x_lo];
        breaks.extend(
            slice
                .feature_points()
                .into_iter()
                .filter(|&f| f > bump.x_lo && f < bump.x_hi),
        );
        breaks.push(bump.x_hi);
        let (mut i1, mut i2) = (0.0, 0.0);
        for w in breaks.windows(2) {
            for (x, wx) in rule.points(w[0], w[1]) {
                let s = self.state(x, t);
                let (phi, phi_x, phi_t) = bump.eval(x, t);
                let (m, u, rho) = (self.m_at(&s), self.velocity_at(&s), self.rho_ac_at(&s));
                i1 += wx * (phi_t * m - phi * u * rho);
                i2 += wx * (phi_t * u + phi_x * u * u) * rho;
            }
        }
        if atoms {
            for j in slice.interior() {
                let (phi, phi_x, phi_t) = bump.eval(j.x, t);
                let u = j.velocity;
                i1 -= phi * u * j.mass;
                i2 += (phi_t * u + phi_x * u * u) * j.mass;
            }
        }
        (i1, i2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;
    use approx::assert_abs_diff_eq;

    fn problem(name: &str) -> Problem {
        builtin(name).unwrap().problem().unwrap()
    }

    #[test]
    fn takeoff_mass_balance() {
        let p = problem("boundary-takeoff");
        let r = p.mass_balance(2.0, 10.0).unwrap();
        assert!(r.residual.abs() < 1e-10);
        assert_abs_diff_eq!(r.total, 4.0 + 8e-4, epsilon = 1e-9);
        let r = p.mass_balance(0.0, 10.0).unwrap();
        assert_abs_diff_eq!(r.total, 2.0 + 8e-4, epsilon = 1e-12);
        assert!(matches!(
            problem("raref-delta").mass_balance(0.5, 10.0),
            Err(Error::NonCompactScenario { .. })
        ));
    }

    #[test]
    fn takeoff_momentum_balance() {
        let p = problem("boundary-takeoff");
        let r = p.momentum_balance(9.0, 10.0).unwrap();
        assert_eq!(r.relation, Relation::Equality);
        assert_abs_diff_eq!(r.expected, -4.0 + 9.0, epsilon = 1e-12);
        assert!(r.residual.abs() < 1e-8);
        let r = p.momentum_balance(3.0, 10.0).unwrap();
        assert_eq!(r.relation, Relation::AtLeast);
        assert_abs_diff_eq!(r.expected, -7.0, epsilon = 1e-12);
        assert!(r.holds(1e-9));
    }

    #[test]
    fn entropy_raref() {
        let p = problem("raref-delta");
        let r = p.entropy_report(0.5, (0.0, 4.0), 200).unwrap();
        assert_eq!(r.shocks, 1);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.checked > 100);
    }

    #[test]
    fn boundary_trace_raref() {
        let p = problem("raref-delta");
        let rows = p.boundary_trace(&[0.01, 3.0, 6.0]).unwrap();
        assert_abs_diff_eq!(rows[0].u_limit, 1.0, epsilon = 1e-9);
        assert_eq!(rows[1].regime, RegimeTag::BoundaryDominated);
        assert_abs_diff_eq!(rows[1].u_limit, 1.0, epsilon = 1e-9);
        assert_eq!(rows[1].atom_mass, 0.0);
        assert_abs_diff_eq!(rows[2].atom_mass, 18.0, epsilon = 1e-12);
    }

    #[test]
    fn initial_trace_examples() {
        let rows = problem("raref-delta").initial_trace(&[1.0, 3.0], 1e-4).unwrap();
        assert_abs_diff_eq!(rows[0].u, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rows[0].m, 1.0 - 2e-4, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[1].u, -2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rows[1].m, 3.0 + 2e-4, epsilon = 1e-12);
        let rows = problem("two-deltas").initial_trace(&[1.0], 1e-4).unwrap();
        assert_abs_diff_eq!(rows[0].u, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rows[0].m, 1.0 - 1e-4, epsilon = 1e-12);
    }

    #[test]
    fn h_derivatives() {
        let p = problem("raref-delta");
        let h = 1e-4;
        for &(x, t) in &[(3.0, 0.25), (0.7, 0.5), (1.2, 3.0), (0.3, 2.0)] {
            let hx = (p.second_potential_h(x + h, t).unwrap() - p.second_potential_h(x - h, t).unwrap()) / (2.0 * h);
            let ht = (p.second_potential_h(x, t + h).unwrap() - p.second_potential_h(x, t - h).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(hx, -p.momentum_potential(x, t).unwrap(), epsilon = 1e-5);
            assert_abs_diff_eq!(ht, 2.0 * p.energy_potential(x, t).unwrap(), epsilon = 1e-5);
        }
        assert_abs_diff_eq!(p.second_potential_h(0.75, 0.5).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn h_for_uniform_flow() {
        use crate::profile::{PiecewiseProfile, ProfileKind, Segment};
        let seg = [Segment::new(None, 2.0, 1.0)];
        let p = Problem::new(
            PiecewiseProfile::build(ProfileKind::Initial, &seg).unwrap(),
            PiecewiseProfile::build(ProfileKind::Boundary, &seg).unwrap(),
        )
        .unwrap();
        for &(x, t) in &[(5.0, 1.5), (0.5, 2.0), (3.0, 3.0)] {
            assert_abs_diff_eq!(p.second_potential_h(x, t).unwrap(), -(x - t) * (x - t), epsilon = 1e-12);
        }
    }

    #[test]
    fn mu_windows_raref() {
        let p = problem("raref-delta");
        let c = p.mu_identity_x(0.5, 0.0, 4.0).unwrap();
        assert!(c.relative() < 1e-9, "{c:?}");
        let c = p.mu_identity_t(1.0, 0.5, 6.0).unwrap();
        assert!(c.relative() < 1e-8, "{c:?}");
    }

    #[test]
    fn weak_residual_raref() {
        let p = problem("raref-delta");
        let bump = TestBump::new(1.0, 3.0, 0.2, 0.8).unwrap();
        let r = p.weak_residual(&bump, 64).unwrap();
        assert!(r.max_abs() < 1e-6, "{r:?}");
        let straddle = TestBump::new(1.2, 2.4, 1.1, 1.7).unwrap();
        let r = p.weak_residual(&straddle, 64).unwrap();
        assert!(r.max_abs() < 1e-6, "{r:?}");
        let dropped = p.weak_residual_with(&straddle, 64, false).unwrap();
        assert!(dropped.max_abs() > 1e-2, "{dropped:?}");
    }
}
