//! Exact minimization of the initial potential `F` and the boundary potential `G`.
//!
//! For piecewise-constant data each section `y ↦ F(y, x, t)` is a convex
//! quadratic on every segment, so the global minimum is attained at a
//! breakpoint or at a segment-interior critical point. Listing those
//! candidates gives the minimum and both extreme minimizers exactly.
//!
//! A breakpoint bordering a segment whose critical point is interior is
//! strictly dominated by that critical point, so it is left out. This keeps
//! quadratic contacts near fan edges from registering as ties.

use serde::Serialize;

use crate::error::Result;
use crate::problem::{check_nonneg, Problem};

/// Which closed-form piece of the data produced a minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// The segment start with this index (index 0 is the origin).
    Breakpoint(usize),
    /// The critical point inside the segment with this index.
    Interior(usize),
}

/// Minimum of one potential section with its leftmost and rightmost minimizers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizerResult {
    pub value: f64,
    pub arg_lo: f64,
    pub arg_hi: f64,
    pub branch_lo: Branch,
    pub branch_hi: Branch,
    /// Magnitude of the terms entering `value`; sets the tie tolerance.
    pub scale: f64,
}

impl MinimizerResult {
    pub fn is_unique(&self) -> bool {
        self.arg_lo == self.arg_hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeTag {
    InitialDominated,
    BoundaryDominated,
    Interface,
}

impl RegimeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::InitialDominated => "initial",
            RegimeTag::BoundaryDominated => "boundary",
            RegimeTag::Interface => "interface",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub f_value: f64,
    pub g_value: f64,
}

/// Both minimizations at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialState {
    pub x: f64,
    pub t: f64,
    pub f: MinimizerResult,
    pub g: MinimizerResult,
}

impl PotentialState {
    /// `F ≤ G`, compared exactly. Decides which potential defines `m`, `q` and `E`.
    #[inline]
    pub fn initial_side(&self) -> bool {
        self.f.value <= self.g.value
    }

    /// `min(F, G)`.
    #[inline]
    pub fn mu(&self) -> f64 {
        self.f.value.min(self.g.value)
    }

    /// Branch that continues to the right of `x`, tagged with the side.
    #[inline]
    pub(crate) fn right_branch(&self) -> (bool, Branch) {
        if self.initial_side() {
            (true, self.f.branch_hi)
        } else {
            (false, self.g.branch_lo)
        }
    }

    /// Branch that continues to the left of `x`, tagged with the side.
    #[inline]
    pub(crate) fn left_branch(&self) -> (bool, Branch) {
        if self.initial_side() {
            (true, self.f.branch_lo)
        } else {
            (false, self.g.branch_hi)
        }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    arg: f64,
    branch: Branch,
    value: f64,
    magnitude: f64,
}

fn select(cands: impl Iterator<Item = Candidate> + Clone, tie_rel: f64) -> MinimizerResult {
    let mut value = f64::INFINITY;
    let mut scale: f64 = 1.0;
    for c in cands.clone() {
        value = value.min(c.value);
        scale = scale.max(1.0 + c.magnitude);
    }
    let cut = value + tie_rel * scale;
    let mut lo = (f64::INFINITY, Branch::Breakpoint(0));
    let mut hi = (f64::NEG_INFINITY, Branch::Breakpoint(0));
    for c in cands.filter(|c| c.value <= cut) {
        if c.arg < lo.0 {
            lo = (c.arg, c.branch);
        }
        if c.arg > hi.0 {
            hi = (c.arg, c.branch);
        }
    }
    MinimizerResult {
        value,
        arg_lo: lo.0,
        arg_hi: hi.0,
        branch_lo: lo.1,
        branch_hi: hi.1,
        scale,
    }
}

impl Problem {
    /// `F(y, x, t) = ∫₀ʸ [t u₀(η) + η − x] ρ₀(η) dη`.
    pub fn eval_f(&self, y: f64, x: f64, t: f64) -> Result<f64> {
        check_nonneg("y", y)?;
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        let p = &self.initial;
        let j = p.segment_at(y);
        Ok(t * p.moment_in(j, y, 1, 0) + p.moment_in(j, y, 0, 1) - x * p.moment_in(j, y, 0, 0))
    }

    /// `G(τ, x, t) = ∫₀^τ [x − u_b(ξ)(t − ξ)] ρ_b(ξ) u_b(ξ) dξ`.
    pub fn eval_g(&self, tau: f64, x: f64, t: f64) -> Result<f64> {
        check_nonneg("tau", tau)?;
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        let b = &self.boundary;
        let j = b.segment_at(tau);
        Ok(x * b.moment_in(j, tau, 1, 0) - t * b.moment_in(j, tau, 2, 0) + b.moment_in(j, tau, 2, 1))
    }

    pub fn minimize_initial_potential(&self, x: f64, t: f64) -> Result<MinimizerResult> {
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        Ok(self.min_f(x, t))
    }

    pub fn minimize_boundary_potential(&self, x: f64, t: f64) -> Result<MinimizerResult> {
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        Ok(self.min_g(x, t))
    }

    /// `μ(x, t) = min(F(x, t), G(x, t))`.
    pub fn mu(&self, x: f64, t: f64) -> Result<f64> {
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        Ok(self.state(x, t).mu())
    }

    pub fn classify(&self, x: f64, t: f64) -> Result<Regime> {
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        Ok(self.regime_of(&self.state(x, t)))
    }

    pub fn potential_state(&self, x: f64, t: f64) -> Result<PotentialState> {
        check_nonneg("x", x)?;
        check_nonneg("t", t)?;
        Ok(self.state(x, t))
    }

    pub(crate) fn regime_of(&self, s: &PotentialState) -> Regime {
        let (f, g) = (s.f.value, s.g.value);
        let tag = if (f - g).abs() <= self.tol.eq(f, g) {
            RegimeTag::Interface
        } else if f < g {
            RegimeTag::InitialDominated
        } else {
            RegimeTag::BoundaryDominated
        };
        Regime {
            tag,
            f_value: f,
            g_value: g,
        }
    }

    #[inline]
    pub(crate) fn state(&self, x: f64, t: f64) -> PotentialState {
        PotentialState {
            x,
            t,
            f: self.min_f(x, t),
            g: self.min_g(x, t),
        }
    }

    pub(crate) fn min_f(&self, x: f64, t: f64) -> MinimizerResult {
        let p = &self.initial;
        let bound = x + t * p.sup_abs_velocity();
        debug_assert!({
            let (_, u) = p.value_at(bound);
            t * u + bound - x >= -1e-12 * (1.0 + bound)
        });
        let n = (0..p.len()).take_while(|&j| p.start(j) <= bound).count().max(1);
        let eval = move |j: usize, y: f64| {
            let (m, mom, a) = (
                p.moment_in(j, y, 0, 0),
                p.moment_in(j, y, 1, 0),
                p.moment_in(j, y, 0, 1),
            );
            (t * mom + a - x * m, (t * mom).abs() + a.abs() + (x * m).abs())
        };
        let crit = move |j: usize| {
            let c = x - t * p.velocity_of(j);
            (p.start(j) < c && c < p.end(j)).then_some(c)
        };
        let cands = (0..n).flat_map(move |j| {
            let s = p.start(j);
            let interior = crit(j);
            let shadowed = interior.is_some() || (j > 0 && crit(j - 1).is_some());
            let bp = (!shadowed).then(|| {
                let (v, mag) = eval(j, s);
                Candidate {
                    arg: s,
                    branch: Branch::Breakpoint(j),
                    value: v,
                    magnitude: mag,
                }
            });
            let ic = interior.map(|c| {
                let (v, mag) = eval(j, c);
                Candidate {
                    arg: c,
                    branch: Branch::Interior(j),
                    value: v,
                    magnitude: mag,
                }
            });
            bp.into_iter().chain(ic)
        });
        select(cands, self.tol.tie_rel)
    }

    pub(crate) fn min_g(&self, x: f64, t: f64) -> MinimizerResult {
        let b = &self.boundary;
        let n = (0..b.len()).take_while(|&j| b.start(j) <= t).count().max(1);
        let eval = move |j: usize, tau: f64| {
            let (bb, pb, ab) = (
                b.moment_in(j, tau, 1, 0),
                b.moment_in(j, tau, 2, 0),
                b.moment_in(j, tau, 2, 1),
            );
            (x * bb - t * pb + ab, (x * bb).abs() + (t * pb).abs() + ab.abs())
        };
        let crit = move |j: usize| {
            let c = t - x / b.velocity_of(j);
            (b.start(j) < c && c < b.end(j) && c <= t).then_some(c)
        };
        let cands = (0..n).flat_map(move |j| {
            let s = b.start(j);
            let interior = crit(j);
            let shadowed = interior.is_some() || (j > 0 && crit(j - 1).is_some());
            let bp = (!shadowed).then(|| {
                let (v, mag) = eval(j, s);
                Candidate {
                    arg: s,
                    branch: Branch::Breakpoint(j),
                    value: v,
                    magnitude: mag,
                }
            });
            let ic = interior.map(|c| {
                let (v, mag) = eval(j, c);
                Candidate {
                    arg: c,
                    branch: Branch::Interior(j),
                    value: v,
                    magnitude: mag,
                }
            });
            bp.into_iter().chain(ic)
        });
        select(cands, self.tol.tie_rel)
    }
}
