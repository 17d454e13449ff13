//! Solution fields: velocity `u`, potentials `m`, `q`, `E`, and the density measure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::{Branch, MinimizerResult, PotentialState, Regime, RegimeTag};
use crate::problem::{check_nonneg, check_time, Problem};
use crate::slice::{Jump, Slice};

/// Regime and field values at one space-time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    pub regime: Regime,
    pub u: f64,
    pub m: f64,
    pub q: f64,
    pub e: f64,
    /// Density of the absolutely continuous part of `ρ` at `x`.
    pub rho_ac: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomLocation {
    Interior,
    Boundary,
}

impl AtomLocation {
    pub fn as_str(self) -> &'static str {
        match self {
            AtomLocation::Interior => "interior",
            AtomLocation::Boundary => "boundary",
        }
    }
}

/// One Dirac component of the density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomRecord {
    pub x: f64,
    pub mass: f64,
    pub u: f64,
    pub location: AtomLocation,
}

impl From<&Jump> for AtomRecord {
    fn from(j: &Jump) -> Self {
        AtomRecord {
            x: j.x,
            mass: j.mass,
            u: j.velocity,
            location: if j.at_boundary {
                AtomLocation::Boundary
            } else {
                AtomLocation::Interior
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub t: f64,
    pub ac_samples: Vec<(f64, f64)>,
    pub atoms: Vec<AtomRecord>,
}

/// One piece of a foot interval that collapsed into an atom.
#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: f64,
    hi: f64,
    velocity: f64,
    x: f64,
}

/// One-sided limit of `f` at `x` from direction `dir = ±1`, by Richardson
/// extrapolation over the offsets `h, h/2, h/4`.
pub fn one_sided_limit(f: impl Fn(f64) -> f64, x: f64, dir: f64, h: f64) -> f64 {
    let (f1, f2, f4) = (f(x + dir * h), f(x + dir * h / 2.0), f(x + dir * h / 4.0));
    (8.0 * f4 - 6.0 * f2 + f1) / 3.0
}

/// Offset for one-sided limits.
pub const LIMIT_STEP: f64 = 1e-4;

impl Problem {
    pub fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        Ok(self.velocity_at(&self.state(x, t)))
    }

    pub fn mass_potential(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        Ok(self.m_at(&self.state(x, t)))
    }

    pub fn momentum_potential(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        Ok(self.q_at(&self.state(x, t)))
    }

    pub fn energy_potential(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_time(t)?;
        let slice = self.covering_slice(x, t);
        Ok(self.energy_with(&slice, &self.state(x, t)))
    }

    pub fn sample(&self, x: f64, t: f64) -> Result<SolutionSample> {
        check_nonneg("x", x)?;
        check_time(t)?;
        let slice = self.covering_slice(x, t);
        Ok(self.sample_with(&slice, x))
    }

    /// Samples on a grid sharing one feature scan.
    pub fn field_samples(&self, t: f64, xs: &[f64]) -> Result<Vec<SolutionSample>> {
        check_time(t)?;
        for &x in xs {
            check_nonneg("x", x)?;
        }
        let hi = xs.iter().copied().fold(0.0, f64::max);
        let slice = self.covering_slice(hi, t);
        Ok(xs.iter().map(|&x| self.sample_with(&slice, x)).collect())
    }

    pub fn density_profile(&self, t: f64, x_grid: &[f64]) -> Result<DensityProfile> {
        check_time(t)?;
        if x_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::OutOfRange {
                name: "x_grid",
                value: f64::NAN,
            });
        }
        let (Some(&lo), Some(&hi)) = (x_grid.first(), x_grid.last()) else {
            return Ok(DensityProfile {
                t,
                ac_samples: Vec::new(),
                atoms: Vec::new(),
            });
        };
        check_nonneg("x", lo)?;
        let slice = self.default_slice(t, 0.0, hi);
        let atoms = slice
            .jumps
            .iter()
            .filter(|j| j.at_boundary || (j.x >= lo && j.x <= hi))
            .map(AtomRecord::from)
            .collect();
        let ac_samples = x_grid.iter().map(|&x| (x, self.rho_ac_at(&self.state(x, t)))).collect();
        Ok(DensityProfile { t, ac_samples, atoms })
    }

    /// Slice over `[0, X]` with `X` past `x` and past the interface region.
    pub(crate) fn covering_slice(&self, x: f64, t: f64) -> Slice {
        let reach = self.interface_reach(t);
        let hi = x.max(reach);
        self.default_slice(t, 0.0, hi)
    }

    /// A point right of every boundary-governed point at time `t`.
    pub(crate) fn interface_reach(&self, t: f64) -> f64 {
        match self.interface_bounds(t) {
            Some((l, _)) => l + 1e-6 * self.length_scale(t),
            None => 0.0,
        }
    }

    pub(crate) fn sample_with(&self, slice: &Slice, x: f64) -> SolutionSample {
        let s = self.state(x, slice.t);
        SolutionSample {
            x,
            t: slice.t,
            regime: self.regime_of(&s),
            u: self.velocity_at(&s),
            m: self.m_at(&s),
            q: self.q_at(&s),
            e: self.energy_with(slice, &s),
            rho_ac: self.rho_ac_at(&s),
        }
    }

    pub(crate) fn velocity_at(&self, s: &PotentialState) -> f64 {
        let (x, t) = (s.x, s.t);
        let tag = self.regime_of(s).tag;
        if x == 0.0 {
            return match tag {
                RegimeTag::BoundaryDominated => self.boundary.value_at(t).1,
                RegimeTag::InitialDominated => 0.0,
                RegimeTag::Interface => self.combined_quotient(s.f.arg_hi, t).unwrap_or(0.0),
            };
        }
        match tag {
            RegimeTag::InitialDominated => self.initial_velocity(&s.f, x, t),
            RegimeTag::BoundaryDominated => self.boundary_velocity(&s.g, x, t),
            RegimeTag::Interface => self.combined_quotient(s.f.arg_hi, s.g.arg_hi).unwrap_or(x / t),
        }
    }

    /// Mean velocity of the feet `[0, y] ∪ [0, τ]`; `None` when they carry no mass.
    fn combined_quotient(&self, y: f64, tau: f64) -> Option<f64> {
        let (mass, mom) = self.preimage_load(Some((0.0, y)), Some((0.0, tau)));
        (mass > 0.0).then(|| mom / mass)
    }

    pub(crate) fn initial_velocity(&self, f: &MinimizerResult, x: f64, t: f64) -> f64 {
        let p = &self.initial;
        if !f.is_unique() {
            let dm = p.moment_between(f.arg_lo, f.arg_hi, 0, 0);
            if dm > 0.0 {
                return p.moment_between(f.arg_lo, f.arg_hi, 1, 0) / dm;
            }
        }
        match f.branch_lo {
            Branch::Interior(j) => p.velocity_of(j),
            Branch::Breakpoint(_) => (x - f.arg_lo) / t,
        }
    }

    pub(crate) fn boundary_velocity(&self, g: &MinimizerResult, x: f64, t: f64) -> f64 {
        let b = &self.boundary;
        if !g.is_unique() {
            let db = b.moment_between(g.arg_lo, g.arg_hi, 1, 0);
            if db > 0.0 {
                return b.moment_between(g.arg_lo, g.arg_hi, 2, 0) / db;
            }
        }
        match g.branch_lo {
            Branch::Interior(j) => b.velocity_of(j),
            Branch::Breakpoint(_) => x / (t - g.arg_lo),
        }
    }

    pub(crate) fn m_at(&self, s: &PotentialState) -> f64 {
        if s.x > 0.0 && s.initial_side() {
            self.initial.moment(s.f.arg_lo, 0, 0)
        } else {
            -self.boundary.moment(self.tau_lo(s), 1, 0)
        }
    }

    pub(crate) fn q_at(&self, s: &PotentialState) -> f64 {
        if s.x > 0.0 && s.initial_side() {
            self.initial.moment(s.f.arg_lo, 1, 0)
        } else {
            -self.boundary.moment(self.tau_lo(s), 2, 0)
        }
    }

    #[inline]
    fn tau_lo(&self, s: &PotentialState) -> f64 {
        if s.x == 0.0 {
            s.t
        } else {
            s.g.arg_lo
        }
    }

    /// `m(x⁺, t)`, treating `x = 0` as the limit from inside the domain.
    pub(crate) fn m_right(&self, s: &PotentialState) -> f64 {
        if s.initial_side() {
            self.initial.moment(s.f.arg_hi, 0, 0)
        } else {
            -self.boundary.moment(s.g.arg_lo, 1, 0)
        }
    }

    pub(crate) fn q_right(&self, s: &PotentialState) -> f64 {
        if s.initial_side() {
            self.initial.moment(s.f.arg_hi, 1, 0)
        } else {
            -self.boundary.moment(s.g.arg_lo, 2, 0)
        }
    }

    /// Absolutely continuous density from the governing branch.
    pub(crate) fn rho_ac_at(&self, s: &PotentialState) -> f64 {
        let branch = if s.x == 0.0 {
            s.right_branch()
        } else if s.initial_side() {
            (true, s.f.branch_lo)
        } else {
            (false, s.g.branch_lo)
        };
        match branch {
            (true, Branch::Interior(j)) => self.initial.density_of(j),
            (false, Branch::Interior(j)) => self.boundary.density_of(j),
            (_, Branch::Breakpoint(_)) => 0.0,
        }
    }

    fn pieces(slice: &Slice, initial: bool) -> Vec<Piece> {
        let mut v: Vec<Piece> = slice
            .jumps
            .iter()
            .filter_map(|j| {
                let pre = if initial { j.initial_pre } else { j.boundary_pre };
                pre.filter(|(lo, hi)| hi > lo).map(|(lo, hi)| Piece {
                    lo,
                    hi,
                    velocity: j.velocity,
                    x: j.x,
                })
            })
            .collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        v
    }

    /// Splits `[0, upper]` into free stretches and atom feet.
    fn partitioned(
        pieces: &[Piece],
        upper: f64,
        mut free: impl FnMut(f64, f64) -> f64,
        mut atom: impl FnMut(&Piece, f64, f64) -> f64,
    ) -> f64 {
        let mut sum = 0.0;
        let mut cursor = 0.0;
        for pc in pieces {
            let lo = pc.lo.max(cursor);
            let hi = pc.hi.min(upper);
            if lo >= upper {
                break;
            }
            if hi <= lo {
                continue;
            }
            if lo > cursor {
                sum += free(cursor, lo);
            }
            sum += atom(pc, lo, hi);
            cursor = hi;
        }
        if upper > cursor {
            sum += free(cursor, upper);
        }
        sum
    }

    /// Upper foot for the energy and `H` integrals at `s`.
    fn foot_upper(&self, s: &PotentialState) -> (bool, f64) {
        if s.x > 0.0 && s.initial_side() {
            (true, s.f.arg_lo)
        } else {
            (false, self.tau_lo(s))
        }
    }

    /// `E(x, t)` using the atoms of a slice that covers `x` and the interface.
    pub(crate) fn energy_with(&self, slice: &Slice, s: &PotentialState) -> f64 {
        let (initial, upper) = self.foot_upper(s);
        let pieces = Self::pieces(slice, initial);
        if initial {
            let p = &self.initial;
            0.5 * Self::partitioned(
                &pieces,
                upper,
                |a, b| p.moment_between(a, b, 2, 0),
                |pc, a, b| pc.velocity * p.moment_between(a, b, 1, 0),
            )
        } else {
            let b_ = &self.boundary;
            -0.5 * Self::partitioned(
                &pieces,
                upper,
                |a, b| b_.moment_between(a, b, 3, 0),
                |pc, a, b| pc.velocity * b_.moment_between(a, b, 2, 0),
            )
        }
    }

    /// `H(x, t)`, the second potential with `H_x = −q` and `H_t = 2E`.
    pub(crate) fn h_with(&self, slice: &Slice, s: &PotentialState) -> f64 {
        let (initial, upper) = self.foot_upper(s);
        let (x, t) = (s.x, s.t);
        let pieces = Self::pieces(slice, initial);
        if initial {
            let p = &self.initial;
            Self::partitioned(
                &pieces,
                upper,
                |a, b| {
                    p.moment_between(a, b, 1, 1) + t * p.moment_between(a, b, 2, 0) - x * p.moment_between(a, b, 1, 0)
                },
                |pc, a, b| (pc.x - x) * p.moment_between(a, b, 1, 0),
            )
        } else {
            let b_ = &self.boundary;
            -Self::partitioned(
                &pieces,
                upper,
                |a, b| {
                    t * b_.moment_between(a, b, 3, 0)
                        - b_.moment_between(a, b, 3, 1)
                        - x * b_.moment_between(a, b, 2, 0)
                },
                |pc, a, b| (pc.x - x) * b_.moment_between(a, b, 2, 0),
            )
        }
    }
}
