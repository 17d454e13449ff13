//! The initial-boundary value problem: data profiles plus numerical tolerances.

use crate::error::{Error, Result};
use crate::profile::{PiecewiseProfile, ProfileKind};

/// Numerical tolerances shared by every solver operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute floor of the interface tolerance `|F - G|`.
    pub eq_abs: f64,
    /// Relative part of the interface tolerance, scaled by `1 + |F| + |G|`.
    pub eq_rel: f64,
    /// Relative tolerance for detecting ties between minimizer candidates.
    pub tie_rel: f64,
    /// Relative tolerance for adaptive quadrature in the diagnostics.
    pub quad_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq_abs: 1e-10,
            eq_rel: 1e-8,
            tie_rel: 1e-12,
            quad_rel: 1e-10,
        }
    }
}

impl Tolerances {
    #[inline]
    pub fn eq(&self, f: f64, g: f64) -> f64 {
        self.eq_abs.max(self.eq_rel * (1.0 + f.abs() + g.abs()))
    }
}

/// Initial data on `x ≥ 0` at `t = 0` and influx data at `x = 0`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub(crate) initial: PiecewiseProfile,
    pub(crate) boundary: PiecewiseProfile,
    pub(crate) tol: Tolerances,
}

impl Problem {
    pub fn new(initial: PiecewiseProfile, boundary: PiecewiseProfile) -> Result<Self> {
        if initial.kind() != ProfileKind::Initial {
            return Err(Error::Schema {
                path: "initial".into(),
                message: "expected an initial profile".into(),
            });
        }
        if boundary.kind() != ProfileKind::Boundary {
            return Err(Error::Schema {
                path: "boundary".into(),
                message: "expected a boundary profile".into(),
            });
        }
        Ok(Problem {
            initial,
            boundary,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn initial(&self) -> &PiecewiseProfile {
        &self.initial
    }

    pub fn boundary(&self) -> &PiecewiseProfile {
        &self.boundary
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Smallest and largest data velocity.
    pub fn velocity_hull(&self) -> (f64, f64) {
        (
            self.initial.inf_velocity().min(self.boundary.inf_velocity()),
            self.initial.sup_velocity().max(self.boundary.sup_velocity()),
        )
    }

    /// Velocity scale `max(|u|)` over all data, at least 1.
    pub fn speed_scale(&self) -> f64 {
        let (lo, hi) = self.velocity_hull();
        lo.abs().max(hi.abs()).max(1.0)
    }

    /// Length scale used for relative spatial tolerances at time `t`.
    pub fn length_scale(&self, t: f64) -> f64 {
        let breaks = self.initial.breakpoints();
        1.0 + breaks[breaks.len() - 1] + t * self.speed_scale()
    }
}

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeArgument { name, value })
    }
}

/// Times at which the fields are defined: `t > 0`.
pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else if t == 0.0 {
        Err(Error::UndefinedAtRarefactionCenter)
    } else {
        Err(Error::NegativeArgument { name: "t", value: t })
    }
}
