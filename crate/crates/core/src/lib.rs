//! Measure-valued solutions of pressureless gas dynamics on the half-line
//! `x ≥ 0` with prescribed influx at `x = 0`.
//!
//! The solution is built pointwise from two generalized potentials: `F`,
//! minimized over initial feet, and `G`, minimized over boundary feet. All
//! fields (velocity `u`, mass, momentum and energy potentials `m`, `q`, `E`,
//! the density with its Dirac atoms) follow from the extreme minimizers.
//!
//! ```
//! use pgd_core::builtin;
//! let problem = builtin("raref-delta").unwrap().problem().unwrap();
//! assert_eq!(problem.velocity(1.5, 1.0).unwrap(), 1.5);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristics;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod oracle;
pub mod output;
pub mod potentials;
pub mod problem;
pub mod profile;
pub mod quadrature;
pub mod scenario;
pub mod slice;
pub mod validation;

pub use characteristics::{
    BoundaryEvent, BoundaryEventKind, InterfaceInterval, MergeEvent, PathEnd, ShockPath, ShockPoint, ShockSource,
    ShockTrack,
};
pub use diagnostics::{
    BalanceReport, BoundaryTraceRow, EntropyReport, EntropyViolation, InitialTraceRow, MuAxis, MuIdentityCheck,
    Relation, TestBump, WeakResidual,
};
pub use error::{Error, Result};
pub use field::{one_sided_limit, AtomLocation, AtomRecord, DensityProfile, SolutionSample, LIMIT_STEP};
pub use potentials::{Branch, MinimizerResult, PotentialState, Regime, RegimeTag};
pub use problem::{Problem, Tolerances};
pub use profile::{Cumulants, PiecewiseProfile, ProfileKind, Segment, DEFAULT_EPS_FLOOR};
pub use scenario::{builtin, builtin_scenarios, parse_scenario, parse_scenario_str, OutputKind, Scenario, XGrid};
pub use slice::{Jump, Slice};
pub use validation::{validate_scenario, CheckResult, PathSummary, ValidationReport};
