//! Piecewise-constant data profiles and their exact cumulative integrals.
//!
//! Every potential in the solver is a linear combination of moments
//! `∫₀ˢ ρ uᵖ ηᵏ dη` with `p ≤ 3` and `k ≤ 1`. These are stored at each
//! breakpoint and evaluated in closed form in between.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default density floor applied to every segment.
pub const DEFAULT_EPS_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Data on the half-line at `t = 0`, parametrized by position `η`.
    Initial,
    /// Influx data at `x = 0`, parametrized by time `ξ`.
    Boundary,
}

/// One input segment. `end == None` means the segment extends to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub end: Option<f64>,
    pub density: f64,
    pub velocity: f64,
}

impl Segment {
    pub fn new(end: Option<f64>, density: f64, velocity: f64) -> Self {
        Segment { end, density, velocity }
    }
}

/// Cumulative integrals at a point. For initial profiles `b` is zero;
/// `p` and `a` carry one extra factor of velocity for boundary profiles.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Cumulants {
    pub m: f64,
    pub p: f64,
    pub a: f64,
    pub b: f64,
}

const N_MOMENTS: usize = 8;

#[inline]
const fn slot(p: usize, k: usize) -> usize {
    2 * p + k
}

/// Piecewise-constant `(density, velocity)` data on `[0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseProfile {
    kind: ProfileKind,
    starts: Vec<f64>,
    density: Vec<f64>,
    velocity: Vec<f64>,
    prefix: Vec<[f64; N_MOMENTS]>,
    eps_floor: f64,
}

impl PiecewiseProfile {
    /// Builds a profile from consecutive segments; only the last may be unbounded.
    pub fn build(kind: ProfileKind, segments: &[Segment]) -> Result<Self> {
        Self::build_with_floor(kind, segments, DEFAULT_EPS_FLOOR)
    }

    pub fn build_with_floor(kind: ProfileKind, segments: &[Segment], eps_floor: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if !(eps_floor.is_finite() && eps_floor > 0.0) {
            return Err(Error::OutOfRange {
                name: "eps_floor",
                value: eps_floor,
            });
        }
        let n = segments.len();
        let mut starts = Vec::with_capacity(n);
        let mut density = Vec::with_capacity(n);
        let mut velocity = Vec::with_capacity(n);
        let mut start = 0.0;
        for (index, seg) in segments.iter().enumerate() {
            if !seg.density.is_finite() || !seg.velocity.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if seg.density < 0.0 {
                return Err(Error::NegativeDensity {
                    index,
                    value: seg.density,
                });
            }
            if kind == ProfileKind::Boundary && seg.velocity <= 0.0 {
                return Err(Error::NonPositiveBoundaryVelocity {
                    index,
                    value: seg.velocity,
                });
            }
            match seg.end {
                Some(end) => {
                    if !end.is_finite() {
                        return Err(Error::NonFinite { index });
                    }
                    if end <= start {
                        return Err(Error::NonIncreasingBreakpoints { index });
                    }
                }
                None if index + 1 != n => return Err(Error::NonIncreasingBreakpoints { index: index + 1 }),
                None => {}
            }
            starts.push(start);
            density.push(seg.density.max(eps_floor));
            velocity.push(seg.velocity);
            if let Some(end) = seg.end {
                start = end;
            }
        }
        if segments[n - 1].end.is_some() {
            return Err(Error::MissingTail);
        }

        let mut prefix = Vec::with_capacity(n);
        let mut acc = [0.0; N_MOMENTS];
        for j in 0..n {
            prefix.push(acc);
            if j + 1 < n {
                let (a, b) = (starts[j], starts[j + 1]);
                let piece = segment_moments(density[j], velocity[j], a, b);
                for (s, v) in acc.iter_mut().zip(piece) {
                    *s += v;
                }
            }
        }
        Ok(PiecewiseProfile {
            kind,
            starts,
            density,
            velocity,
            prefix,
            eps_floor,
        })
    }

    /// Converts an arbitrary profile to piecewise-constant data by midpoint
    /// sampling on `cells` equal cells of `[0, extent)`, with `tail` beyond.
    pub fn sample<Fn1>(
        kind: ProfileKind,
        extent: f64,
        cells: usize,
        tail: (f64, f64),
        eps_floor: f64,
        f: Fn1,
    ) -> Result<Self>
    where
        Fn1: Fn(f64) -> (f64, f64),
    {
        if !(extent > 0.0) || cells == 0 {
            return Err(Error::OutOfRange {
                name: "extent",
                value: extent,
            });
        }
        let h = extent / cells as f64;
        let mut segs: Vec<Segment> = (0..cells)
            .map(|i| {
                let (rho, u) = f((i as f64 + 0.5) * h);
                let end = if i + 1 == cells { extent } else { (i + 1) as f64 * h };
                Segment::new(Some(end), rho, u)
            })
            .collect();
        segs.push(Segment::new(None, tail.0, tail.1));
        Self::build_with_floor(kind, &segs, eps_floor)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn eps_floor(&self) -> f64 {
        self.eps_floor
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Segment starts; the first is always 0.
    pub fn breakpoints(&self) -> &[f64] {
        &self.starts
    }

    pub fn densities(&self) -> &[f64] {
        &self.density
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocity
    }

    #[inline]
    pub fn start(&self, j: usize) -> f64 {
        self.starts[j]
    }

    /// End of segment `j`, `+∞` for the last one.
    #[inline]
    pub fn end(&self, j: usize) -> f64 {
        self.starts.get(j + 1).copied().unwrap_or(f64::INFINITY)
    }

    #[inline]
    pub fn density_of(&self, j: usize) -> f64 {
        self.density[j]
    }

    #[inline]
    pub fn velocity_of(&self, j: usize) -> f64 {
        self.velocity[j]
    }

    pub fn sup_velocity(&self) -> f64 {
        self.velocity.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf_velocity(&self) -> f64 {
        self.velocity.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_abs_velocity(&self) -> f64 {
        self.velocity.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the segment containing `s` (right-continuous at breakpoints).
    #[inline]
    pub fn segment_at(&self, s: f64) -> usize {
        self.starts.partition_point(|&b| b <= s).saturating_sub(1)
    }

    /// `(density, velocity)` at `s`, taking the right segment at breakpoints.
    pub fn value_at(&self, s: f64) -> (f64, f64) {
        let j = self.segment_at(s);
        (self.density[j], self.velocity[j])
    }

    /// `∫₀ˢ ρ uᵖ ηᵏ dη` for `p ≤ 3`, `k ≤ 1`.
    #[inline]
    pub fn moment(&self, s: f64, p: usize, k: usize) -> f64 {
        self.moment_in(self.segment_at(s), s, p, k)
    }

    /// Same as [`moment`](Self::moment) when the segment of `s` is known.
    #[inline]
    pub fn moment_in(&self, j: usize, s: f64, p: usize, k: usize) -> f64 {
        debug_assert!(p <= 3 && k <= 1);
        let a = self.starts[j];
        let base = self.prefix[j][slot(p, k)];
        if s == a {
            return base;
        }
        let w = self.density[j] * self.velocity[j].powi(p as i32);
        if k == 0 {
            base + w * (s - a)
        } else {
            base + w * 0.5 * (s - a) * (s + a)
        }
    }

    /// `∫ₐᵇ ρ uᵖ ηᵏ`.
    #[inline]
    pub fn moment_between(&self, a: f64, b: f64, p: usize, k: usize) -> f64 {
        self.moment(b, p, k) - self.moment(a, p, k)
    }

    /// Exact cumulants at `s ≥ 0`.
    pub fn eval_cumulants(&self, s: f64) -> Result<Cumulants> {
        if !(s >= 0.0) {
            return Err(Error::NegativeArgument { name: "s", value: s });
        }
        let j = self.segment_at(s);
        Ok(match self.kind {
            ProfileKind::Initial => Cumulants {
                m: self.moment_in(j, s, 0, 0),
                p: self.moment_in(j, s, 1, 0),
                a: self.moment_in(j, s, 0, 1),
                b: 0.0,
            },
            ProfileKind::Boundary => Cumulants {
                m: self.moment_in(j, s, 0, 0),
                p: self.moment_in(j, s, 2, 0),
                a: self.moment_in(j, s, 2, 1),
                b: self.moment_in(j, s, 1, 0),
            },
        })
    }

    /// Inverse of the mass cumulant `M(s) = ∫₀ˢ ρ`.
    pub fn inverse_mass(&self, mass: f64) -> f64 {
        if mass <= 0.0 {
            return 0.0;
        }
        let j = self.prefix.partition_point(|p| p[slot(0, 0)] <= mass).saturating_sub(1);
        self.starts[j] + (mass - self.prefix[j][slot(0, 0)]) / self.density[j]
    }

    /// True when every segment reaching beyond `x` carries density at most `2ε`.
    /// Largest `|u|` on segments reaching past `x`.
    pub fn sup_abs_velocity_beyond(&self, x: f64) -> f64 {
        (0..self.len())
            .filter(|&j| self.end(j) > x)
            .map(|j| self.velocity[j].abs())
            .fold(0.0, f64::max)
    }

    pub fn is_floor_beyond(&self, x: f64) -> bool {
        (0..self.len())
            .filter(|&j| self.end(j) > x)
            .all(|j| self.density[j] <= 2.0 * self.eps_floor)
    }
}

fn segment_moments(rho: f64, u: f64, a: f64, b: f64) -> [f64; N_MOMENTS] {
    let mut out = [0.0; N_MOMENTS];
    let len = b - a;
    let half_sq = 0.5 * (b - a) * (b + a);
    let mut w = rho;
    for p in 0..4 {
        out[slot(p, 0)] = w * len;
        out[slot(p, 1)] = w * half_sq;
        w *= u;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn raref_initial() -> PiecewiseProfile {
        PiecewiseProfile::build(
            ProfileKind::Initial,
            &[Segment::new(Some(2.0), 1.0, 2.0), Segment::new(None, 1.0, -2.0)],
        )
        .unwrap()
    }

    #[test]
    fn velocity_bounds() {
        let p = raref_initial();
        assert_eq!(p.sup_velocity(), 2.0);
        assert_eq!(p.inf_velocity(), -2.0);
    }

    #[test]
    fn unit_boundary_cumulants() {
        let p = PiecewiseProfile::build(ProfileKind::Boundary, &[Segment::new(None, 1.0, 1.0)]).unwrap();
        let c = p.eval_cumulants(2.0).unwrap();
        assert_eq!((c.b, c.p, c.a), (2.0, 2.0, 2.0));
    }

    #[test]
    fn raref_cumulants_at_three() {
        let c = raref_initial().eval_cumulants(3.0).unwrap();
        assert_relative_eq!(c.m, 3.0);
        assert_relative_eq!(c.p, 2.0);
        assert_relative_eq!(c.a, 4.5);
    }

    #[test]
    fn cumulants_vanish_at_origin() {
        let c = raref_initial().eval_cumulants(0.0).unwrap();
        assert_eq!(c, Cumulants::default());
    }

    #[test]
    fn zero_density_is_floored() {
        let p = PiecewiseProfile::build(
            ProfileKind::Initial,
            &[Segment::new(Some(2.0), 1.0, -2.0), Segment::new(None, 0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(p.value_at(5.0).0, DEFAULT_EPS_FLOOR);
        assert!(p.is_floor_beyond(2.0));
        assert!(!p.is_floor_beyond(1.0));
    }

    #[test]
    fn rejects_bad_input() {
        use ProfileKind::*;
        let bad = |kind, segs: &[Segment]| PiecewiseProfile::build(kind, segs).unwrap_err();
        assert_eq!(
            bad(
                Initial,
                &[Segment::new(Some(2.0), 1.0, 0.0), Segment::new(Some(1.0), 1.0, 0.0)]
            ),
            Error::NonIncreasingBreakpoints { index: 1 }
        );
        assert_eq!(
            bad(Initial, &[Segment::new(None, -1.0, 0.0)]),
            Error::NegativeDensity { index: 0, value: -1.0 }
        );
        assert_eq!(
            bad(Boundary, &[Segment::new(None, 1.0, 0.0)]),
            Error::NonPositiveBoundaryVelocity { index: 0, value: 0.0 }
        );
        assert_eq!(bad(Initial, &[Segment::new(Some(1.0), 1.0, 0.0)]), Error::MissingTail);
        assert!(matches!(
            raref_initial().eval_cumulants(-1.0),
            Err(Error::NegativeArgument { .. })
        ));
    }

    #[test]
    fn continuity_at_breakpoints() {
        let p = raref_initial();
        for p_ in 0..4 {
            for k in 0..2 {
                let below = p.moment_in(0, 2.0, p_, k);
                let above = p.moment_in(1, 2.0, p_, k);
                assert_eq!(below, above);
            }
        }
    }

    #[test]
    fn inverse_mass_roundtrip() {
        let p = PiecewiseProfile::build(
            ProfileKind::Initial,
            &[Segment::new(Some(1.0), 2.0, 0.0), Segment::new(None, 0.5, 0.0)],
        )
        .unwrap();
        for s in [0.0, 0.3, 1.0, 2.5, 10.0] {
            assert_relative_eq!(p.inverse_mass(p.moment(s, 0, 0)), s, epsilon = 1e-14);
        }
    }
}
