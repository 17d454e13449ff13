//! Feature scan of one time slice.
//!
//! A cell `[a, b]` is smooth when the branch continuing to the right of `a`
//! is the branch continuing to the left of `b` on the same side: then one
//! closed-form expression describes every minimizer in between. Cells that
//! fail this test are bisected down to a leaf width. A leaf whose preimage
//! carries mass holds an atom; otherwise it marks a fan edge or a branch
//! change. The feature list is exact up to the leaf width.

use crate::potentials::{PotentialState, RegimeTag};
use crate::problem::Problem;

const BASE_CELLS: usize = 64;
const MASS_FLOOR: f64 = 1e-9;
const JITTER: f64 = 0.381_966_011_250_105_1;

/// A Dirac component of the density at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct Jump {
    pub x: f64,
    /// Bracket of width at most the leaf size containing the atom.
    pub cell: (f64, f64),
    pub mass: f64,
    pub momentum: f64,
    /// Velocity by the pointwise definition of `u` at the atom.
    pub velocity: f64,
    /// Feet `[η_lo, η_hi]` on the initial axis that collapsed into the atom.
    pub initial_pre: Option<(f64, f64)>,
    /// Feet `[ξ_lo, ξ_hi]` on the boundary axis that collapsed into the atom.
    pub boundary_pre: Option<(f64, f64)>,
    pub at_boundary: bool,
}

/// Atoms and smooth-branch transitions found in `[x_lo, x_hi]` at time `t`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub t: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Atoms sorted by position, the boundary atom first when present.
    pub jumps: Vec<Jump>,
    /// Positions where the governing branch changes without mass.
    pub transitions: Vec<f64>,
}

impl Slice {
    pub fn boundary_atom(&self) -> Option<&Jump> {
        self.jumps.first().filter(|j| j.at_boundary)
    }

    pub fn interior(&self) -> impl Iterator<Item = &Jump> {
        self.jumps.iter().filter(|j| !j.at_boundary)
    }

    /// Every feature position, sorted: atoms and transitions.
    pub fn feature_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .interior()
            .map(|j| j.x)
            .chain(self.transitions.iter().copied())
            .collect();
        pts.sort_by(f64::total_cmp);
        pts
    }
}

impl Problem {
    /// Scans `[x_lo, x_hi]` at time `t > 0` on `base` initial cells.
    pub(crate) fn scan_slice(&self, t: f64, x_lo: f64, x_hi: f64, base: usize) -> Slice {
        let base = base.max(2);
        let leaf = 1e-12 * (1.0 + x_hi.abs().max(self.length_scale(t)));
        let mut slice = Slice {
            t,
            x_lo,
            x_hi,
            jumps: Vec::new(),
            transitions: Vec::new(),
        };
        if x_lo == 0.0 {
            if let Some(atom) = self.boundary_jump(t) {
                slice.jumps.push(atom);
            }
        }
        if x_hi <= x_lo {
            return slice;
        }
        let width = x_hi - x_lo;
        let mut prev = self.state(x_lo, t);
        for i in 0..base {
            let x = if i + 1 == base {
                x_hi
            } else {
                x_lo + width * (i as f64 + JITTER) / (base - 1) as f64
            };
            let x = x.min(x_hi);
            if x <= prev.x {
                continue;
            }
            let cur = self.state(x, t);
            self.refine(&prev, &cur, leaf, &mut slice);
            if i + 1 != base {
                self.node_jump(&cur, &mut slice);
            }
            prev = cur;
        }
        self.coalesce(&mut slice, leaf);
        slice
    }

    /// Joins atoms reported twice from neighbouring leaves.
    fn coalesce(&self, slice: &mut Slice, leaf: f64) {
        let start = usize::from(slice.boundary_atom().is_some());
        slice.jumps[start..].sort_by(|a, b| a.x.total_cmp(&b.x));
        let union = |a: Option<(f64, f64)>, b: Option<(f64, f64)>| match (a, b) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
            (a, None) => a,
            (None, b) => b,
        };
        let mut out: Vec<Jump> = slice.jumps.drain(start..).collect();
        let mut merged: Vec<Jump> = Vec::with_capacity(out.len());
        for j in out.drain(..) {
            match merged.last_mut() {
                Some(last) if j.cell.0 - last.cell.1 <= 4.0 * leaf => {
                    last.initial_pre = union(last.initial_pre, j.initial_pre);
                    last.boundary_pre = union(last.boundary_pre, j.boundary_pre);
                    last.cell = (last.cell.0, j.cell.1);
                    last.x = 0.5 * (last.cell.0 + last.cell.1);
                    let (mass, momentum) = self.preimage_load(last.initial_pre, last.boundary_pre);
                    last.mass = mass;
                    last.momentum = momentum;
                    last.velocity = momentum / mass;
                }
                _ => merged.push(j),
            }
        }
        slice.jumps.extend(merged);
        slice.transitions.sort_by(f64::total_cmp);
        let jumps = &slice.jumps;
        slice.transitions.retain(|&x| {
            !jumps
                .iter()
                .any(|j| !j.at_boundary && x >= j.cell.0 - 4.0 * leaf && x <= j.cell.1 + 4.0 * leaf)
        });
    }

    pub(crate) fn default_slice(&self, t: f64, x_lo: f64, x_hi: f64) -> Slice {
        self.scan_slice(t, x_lo, x_hi, BASE_CELLS)
    }

    fn refine(&self, a: &PotentialState, b: &PotentialState, leaf: f64, out: &mut Slice) {
        if a.right_branch() == b.left_branch() {
            return;
        }
        if b.x - a.x <= leaf {
            self.leaf(a, b, out);
            return;
        }
        let mid = self.state(0.5 * (a.x + b.x), a.t);
        if mid.x <= a.x || mid.x >= b.x {
            self.leaf(a, b, out);
            return;
        }
        self.refine(a, &mid, leaf, out);
        self.node_jump(&mid, out);
        self.refine(&mid, b, leaf, out);
    }

    /// Records an atom sitting exactly on a scan node.
    fn node_jump(&self, s: &PotentialState, out: &mut Slice) {
        let (ipre, bpre) = if s.initial_side() {
            if s.f.is_unique() {
                return;
            }
            (Some((s.f.arg_lo, s.f.arg_hi)), None)
        } else {
            if s.g.is_unique() {
                return;
            }
            (None, Some((s.g.arg_lo, s.g.arg_hi)))
        };
        self.push_jump(s.x, (s.x, s.x), ipre, bpre, out);
    }

    fn leaf(&self, a: &PotentialState, b: &PotentialState, out: &mut Slice) {
        let (ipre, bpre) = match (a.initial_side(), b.initial_side()) {
            (true, true) => (Some((a.f.arg_hi, b.f.arg_lo)), None),
            (false, true) => (Some((0.0, b.f.arg_lo)), Some((0.0, a.g.arg_lo))),
            (false, false) => (None, Some((b.g.arg_hi, a.g.arg_lo))),
            (true, false) => (None, None),
        };
        self.push_jump(0.5 * (a.x + b.x), (a.x, b.x), ipre, bpre, out);
    }

    fn push_jump(&self, x: f64, cell: (f64, f64), ipre: Option<(f64, f64)>, bpre: Option<(f64, f64)>, out: &mut Slice) {
        let (mass, momentum) = self.preimage_load(ipre, bpre);
        if mass > MASS_FLOOR {
            out.jumps.push(Jump {
                x,
                cell,
                mass,
                momentum,
                velocity: momentum / mass,
                initial_pre: ipre,
                boundary_pre: bpre,
                at_boundary: false,
            });
        } else {
            out.transitions.push(x);
        }
    }

    /// Mass and momentum carried by the given feet.
    pub(crate) fn preimage_load(&self, ipre: Option<(f64, f64)>, bpre: Option<(f64, f64)>) -> (f64, f64) {
        let (mut mass, mut mom) = (0.0, 0.0);
        if let Some((lo, hi)) = ipre {
            if hi > lo {
                mass += self.initial.moment_between(lo, hi, 0, 0);
                mom += self.initial.moment_between(lo, hi, 1, 0);
            }
        }
        if let Some((lo, hi)) = bpre {
            if hi > lo {
                mass += self.boundary.moment_between(lo, hi, 1, 0);
                mom += self.boundary.moment_between(lo, hi, 2, 0);
            }
        }
        (mass, mom)
    }

    /// The atom at `x = 0` present when `F(0, t) ≤ G(0, t)`.
    pub(crate) fn boundary_jump(&self, t: f64) -> Option<Jump> {
        let s = self.state(0.0, t);
        if !s.initial_side() {
            return None;
        }
        let ipre = (0.0, s.f.arg_hi);
        let bpre = (0.0, t);
        let (mass, momentum) = self.preimage_load(Some(ipre), Some(bpre));
        if mass <= MASS_FLOOR {
            return None;
        }
        let velocity = match self.regime_of(&s).tag {
            RegimeTag::InitialDominated => 0.0,
            _ => momentum / mass,
        };
        Some(Jump {
            x: 0.0,
            cell: (0.0, 0.0),
            mass,
            momentum,
            velocity,
            initial_pre: Some(ipre),
            boundary_pre: Some(bpre),
            at_boundary: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::scenario::builtin;
    use approx::assert_abs_diff_eq;

    #[test]
    fn raref_slice_features() {
        let p = builtin("raref-delta").unwrap().problem().unwrap();
        let s = p.default_slice(0.5, 0.0, 4.0);
        assert!(s.boundary_atom().is_none());
        let jumps: Vec<_> = s.interior().collect();
        assert_eq!(jumps.len(), 1);
        assert_abs_diff_eq!(jumps[0].x, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(jumps[0].mass, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(jumps[0].velocity, 0.0, epsilon = 1e-10);
        assert_eq!(s.transitions.len(), 2);
        assert_abs_diff_eq!(s.transitions[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(s.transitions[1], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn coarse_base_grid_finds_shock() {
        let p = builtin("raref-delta").unwrap().problem().unwrap();
        let s = p.scan_slice(0.5, 0.0, 4.0, 2);
        assert_eq!(s.interior().count(), 1);
        let s = p.scan_slice(0.5, 1.5, 2.5, 3);
        assert_eq!(s.interior().count(), 1);
    }

    #[test]
    fn boundary_atom_after_absorption() {
        let p = builtin("raref-delta").unwrap().problem().unwrap();
        let s = p.default_slice(6.0, 0.0, 10.0);
        let atom = s.boundary_atom().unwrap();
        assert_abs_diff_eq!(atom.mass, 18.0, epsilon = 1e-12);
        assert_eq!(atom.velocity, 0.0);
        assert_eq!(s.interior().count(), 0);
    }
}
