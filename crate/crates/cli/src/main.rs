#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pgd_core::output::{write_atoms_csv, write_field_csv, write_shocks_csv, write_track_csv};
use pgd_core::scenario::BUILTIN_NAMES;
use pgd_core::{builtin, parse_scenario, validate_scenario, Error, Scenario};

/// Measure-valued solutions of pressureless gas dynamics on the half-line.
#[derive(Parser, Debug)]
#[command(name = "pgd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample u, m, q, E and the density; writes field.csv and atoms.csv.
    Solve(Common),
    /// Follow every shock over a time range; writes trace.csv.
    Trace(TraceArgs),
    /// Locate shocks at each requested time; writes shocks.csv.
    Shocks(Common),
    /// Run the diagnostics; writes report.json.
    Validate(Common),
    /// Print the built-in scenario names.
    ScenarioList,
}

#[derive(Args, Debug)]
struct Common {
    /// Built-in scenario name or path to a scenario JSON file.
    #[arg(long)]
    scenario: String,
    /// Times as a list `0.5,1,2` or a range `a:b:n`.
    #[arg(long)]
    t: Option<String>,
    /// Spatial grid `a:b:n`.
    #[arg(long)]
    x: Option<String>,
    /// Relative tolerance for F = G ties.
    #[arg(long)]
    tol_eq: Option<f64>,
    /// Density floor applied to both profiles.
    #[arg(long)]
    eps_floor: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    /// Time steps across the traced range.
    #[arg(long, default_value_t = 800)]
    steps: usize,
    /// Full-domain rescans for newborn shocks happen every this many steps.
    #[arg(long, default_value_t = 4)]
    rescan_every: usize,
}

enum Failure {
    Usage(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Solver(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn parse_range(s: &str, what: &str) -> Outcome<Vec<f64>> {
    let bad = || Failure::Usage(format!("--{what}: expected a:b:n, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(pgd_core::XGrid {
        from: a,
        to: b,
        count: n,
    }
    .points())
}

fn parse_times(s: &str) -> Outcome<Vec<f64>> {
    if s.contains(':') {
        return parse_range(s, "t");
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("--t: cannot parse {v:?}")))
        })
        .collect()
}

fn load(c: &Common) -> Outcome<Scenario> {
    let mut sc = if BUILTIN_NAMES.contains(&c.scenario.as_str()) {
        builtin(&c.scenario)?
    } else if Path::new(&c.scenario).exists() {
        parse_scenario(Path::new(&c.scenario))?
    } else {
        return Err(Error::UnknownScenario {
            name: c.scenario.clone(),
        }
        .into());
    };
    if let Some(eps) = c.eps_floor {
        if !(eps > 0.0) {
            return Err(Failure::Usage(format!("--eps-floor must be positive, got {eps}")));
        }
        sc = sc.with_eps_floor(eps)?;
    }
    if let Some(tol) = c.tol_eq {
        if !(tol > 0.0) {
            return Err(Failure::Usage(format!("--tol-eq must be positive, got {tol}")));
        }
        sc.tolerances.eq_rel = tol;
    }
    if let Some(t) = &c.t {
        sc.t_list = parse_times(t)?;
    }
    Ok(sc)
}

fn x_points(c: &Common, sc: &Scenario) -> Outcome<Vec<f64>> {
    match &c.x {
        Some(x) => parse_range(x, "x"),
        None => Ok(sc.x_grid.points()),
    }
}

fn create(dir: &Path, name: &str) -> Outcome<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    println!("{}", path.display());
    Ok(BufWriter::new(File::create(path)?))
}

fn solve(c: &Common) -> Outcome<()> {
    let sc = load(c)?;
    let p = sc.problem()?;
    let xs = x_points(c, &sc)?;
    let mut samples = Vec::new();
    let mut profiles = Vec::new();
    for &t in &sc.t_list {
        samples.extend(p.field_samples(t, &xs)?);
        profiles.push(p.density_profile(t, &xs)?);
    }
    let mut w = create(&c.out, "field.csv")?;
    write_field_csv(&mut w, &samples)?;
    w.flush()?;
    let mut w = create(&c.out, "atoms.csv")?;
    write_atoms_csv(&mut w, &profiles)?;
    w.flush()?;
    Ok(())
}

fn shocks(c: &Common) -> Outcome<()> {
    let sc = load(c)?;
    let p = sc.problem()?;
    let xs = x_points(c, &sc)?;
    let window = (xs[0], xs[xs.len() - 1]);
    let mut all = Vec::new();
    for &t in &sc.t_list {
        all.extend(p.locate_shocks(t, window, 64)?);
    }
    let mut w = create(&c.out, "shocks.csv")?;
    write_shocks_csv(&mut w, &all)?;
    w.flush()?;
    Ok(())
}

fn trace(a: &TraceArgs) -> Outcome<()> {
    let sc = load(&a.common)?;
    if a.steps == 0 || a.rescan_every == 0 {
        return Err(Failure::Usage("--steps and --rescan-every must be positive".into()));
    }
    let (t0, t1) = match &a.common.t {
        Some(_) => {
            let lo = sc.t_list.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = sc.t_list.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
        None => sc.horizon,
    };
    if !(t1 > t0) {
        return Err(Failure::Usage("--t must span a positive time range".into()));
    }
    let p = sc.problem()?;
    let track = p.track_shocks(t0, t1, (t1 - t0) / a.steps as f64, a.rescan_every)?;
    let events = p.boundary_events(t0, t1, 200)?;
    let mut w = create(&a.common.out, "trace.csv")?;
    write_track_csv(&mut w, &track, &events)?;
    w.flush()?;
    Ok(())
}

fn validate(c: &Common) -> Outcome<bool> {
    let sc = load(c)?;
    let report = validate_scenario(&sc)?;
    let mut w = create(&c.out, "report.json")?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{}: {} checks, {failed} failed", report.scenario, report.checks.len());
    Ok(report.passed)
}

fn run(cli: Cli) -> Outcome<bool> {
    match cli.command {
        Command::Solve(c) => solve(&c).map(|_| true),
        Command::Trace(a) => trace(&a).map(|_| true),
        Command::Shocks(c) => shocks(&c).map(|_| true),
        Command::Validate(c) => validate(&c),
        Command::ScenarioList => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 3 })
        }
    }
}
