//! CSV emitters. Numbers carry 17 significant digits so files round-trip.

use std::io::Write;

use crate::characteristics::{BoundaryEvent, ShockPoint, ShockTrack};
use crate::error::Result;
use crate::field::{DensityProfile, SolutionSample};
use crate::oracle::ParticleEvent;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn write_field_csv(w: &mut impl Write, samples: &[SolutionSample]) -> Result<()> {
    writeln!(w, "t,x,regime,u,m,q,e,rho_ac")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_num(s.t),
            fmt_num(s.x),
            s.regime.tag.as_str(),
            fmt_num(s.u),
            fmt_num(s.m),
            fmt_num(s.q),
            fmt_num(s.e),
            fmt_num(s.rho_ac)
        )?;
    }
    Ok(())
}

pub fn write_atoms_csv(w: &mut impl Write, profiles: &[DensityProfile]) -> Result<()> {
    writeln!(w, "t,x,mass,u,location")?;
    for p in profiles {
        for a in &p.atoms {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_num(p.t),
                fmt_num(a.x),
                fmt_num(a.mass),
                fmt_num(a.u),
                a.location.as_str()
            )?;
        }
    }
    Ok(())
}

pub fn write_shocks_csv(w: &mut impl Write, shocks: &[ShockPoint]) -> Result<()> {
    writeln!(w, "t,x,mass,u_left,u_shock,u_right,source,at_boundary")?;
    for s in shocks {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_num(s.t),
            fmt_num(s.x),
            fmt_num(s.mass),
            fmt_num(s.u_left),
            fmt_num(s.u_shock),
            fmt_num(s.u_right),
            s.source.as_str(),
            s.at_boundary
        )?;
    }
    Ok(())
}

/// One row per traced point, then merge and wall events.
pub fn write_track_csv(w: &mut impl Write, track: &ShockTrack, events: &[BoundaryEvent]) -> Result<()> {
    writeln!(w, "kind,path,t,x,mass,velocity")?;
    for (i, path) in track.paths.iter().enumerate() {
        for p in &path.points {
            writeln!(
                w,
                "shock,{i},{},{},{},{}",
                fmt_num(p.t),
                fmt_num(p.x),
                fmt_num(p.mass),
                fmt_num(p.u_shock)
            )?;
        }
    }
    for m in &track.merges {
        writeln!(w, "merge,{},{},{},,", m.into, fmt_num(m.t), fmt_num(m.x))?;
    }
    for e in events {
        writeln!(
            w,
            "{},,{},{},{},",
            e.kind.as_str(),
            fmt_num(e.t),
            fmt_num(0.0),
            fmt_num(e.mass)
        )?;
    }
    Ok(())
}

pub fn write_trajectory_csv(w: &mut impl Write, events: &[ParticleEvent]) -> Result<()> {
    writeln!(w, "t,x,mass,velocity")?;
    for e in events {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_num(e.t),
            fmt_num(e.x),
            fmt_num(e.mass),
            fmt_num(e.velocity)
        )?;
    }
    Ok(())
}
