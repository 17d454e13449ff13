use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::{Branch, MinimizerResult};
use crate::problem::{check_nonneg, check_time, Problem};
use crate::profile::PiecewiseProfile;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Initial,
    Boundary,
}

/// Integrand of the potential on one segment: `F` or `G` grows by
/// `c0·(b − a) + c1·(b² − a²)/2` over `[a, b]`.
fn coefficients(which: Which, rho: f64, u: f64, x: f64, t: f64) -> (f64, f64) {
    match which {
        Which::Initial => (rho * (t * u - x), rho),
        Which::Boundary => (rho * u * (x - u * t), rho * u * u),
    }
}

/// Potential value at `s`, integrated from `from` with known value `acc`.
fn advance(profile: &PiecewiseProfile, which: Which, x: f64, t: f64, from: f64, acc: f64, s: f64) -> f64 {
    let mut v = acc;
    let mut a = from;
    while a < s {
        let j = profile.segment_at(a);
        let b = profile.end(j).min(s);
        let (c0, c1) = coefficients(which, profile.density_of(j), profile.velocity_of(j), x, t);
        v += c0 * (b - a) + 0.5 * c1 * (b - a) * (b + a);
        if b <= a {
            break;
        }
        a = b;
    }
    v
}

/// Grid scan of `F(·, x, t)` or `G(·, x, t)` with golden-section refinement in every basin.
pub fn brute_force_minimize(problem: &Problem, which: Which, x: f64, t: f64, n: usize) -> Result<MinimizerResult> {
    check_nonneg("x", x)?;
    check_time(t)?;
    if n < 1000 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let profile = match which {
        Which::Initial => problem.initial(),
        Which::Boundary => problem.boundary(),
    };
    let upper = match which {
        Which::Initial => x + t * profile.sup_abs_velocity() + 1.0,
        Which::Boundary => t,
    };
    let h = upper / n as f64;
    let mut grid = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for k in 0..=n {
        let s = if k == n { upper } else { h * k as f64 };
        acc = advance(profile, which, x, t, prev, acc, s);
        grid.push(acc);
        prev = s;
    }
    let at = |k: usize| if k == n { upper } else { h * k as f64 };
    let eval = |s: f64| {
        let k = ((s / h).floor() as usize).min(n);
        advance(profile, which, x, t, at(k), grid[k], s)
    };
    let mut basins: Vec<(f64, f64)> = Vec::new();
    for k in 0..=n {
        let left = k == 0 || grid[k] <= grid[k - 1];
        let right = k == n || grid[k] <= grid[k + 1];
        if !(left && right) {
            continue;
        }
        let (mut a, mut b) = (at(k.saturating_sub(1)), at((k + 1).min(n)));
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let (mut fc, mut fd) = (eval(c), eval(d));
        for _ in 0..200 {
            if b - a <= 1e-15 * (1.0 + upper) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = eval(d);
            }
        }
        let mut best = (grid[k], at(k));
        for s in [a, b, 0.5 * (a + b)] {
            let v = eval(s);
            if v < best.0 {
                best = (v, s);
            }
        }
        basins.push(best);
    }
    let value = basins.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let scale = 1.0 + grid.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tie = 1e-9 * scale;
    let ties: Vec<f64> = basins.iter().filter(|b| b.0 <= value + tie).map(|b| b.1).collect();
    let arg_lo = ties.iter().copied().fold(f64::INFINITY, f64::min);
    let arg_hi = ties.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let branch = |s: f64| {
        let j = profile.segment_at(s);
        if (s - profile.start(j)).abs() <= 2.0 * h {
            Branch::Breakpoint(j)
        } else if j + 1 < profile.len() && (profile.end(j) - s).abs() <= 2.0 * h {
            Branch::Breakpoint(j + 1)
        } else {
            Branch::Interior(j)
        }
    };
    Ok(MinimizerResult {
        value,
        arg_lo,
        arg_hi,
        branch_lo: branch(arg_lo),
        branch_hi: branch(arg_hi),
        scale,
    })
}
