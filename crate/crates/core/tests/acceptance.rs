//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use pgd_core::oracle::{brute_force_minimize, compare_mass_potential, sticky_particle_simulate, ParticleConfig, Which};
use pgd_core::validation::random_bump;
use pgd_core::{builtin, builtin_scenarios, BoundaryEventKind, Error, PathEnd, Problem, Relation, ShockPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn problem(name: &str) -> Problem {
    builtin(name).unwrap().problem().unwrap()
}

fn interior(shocks: Vec<ShockPoint>) -> Vec<ShockPoint> {
    shocks.into_iter().filter(|s| !s.at_boundary).collect()
}

fn raref_statics() -> Outcome {
    let p = problem("raref-delta");
    let mut worst: f64 = 0.0;
    let mut counts = Vec::new();
    for t in [0.25, 0.5, 0.9] {
        let s = interior(p.locate_shocks(t, (0.0, 4.0), 64).unwrap());
        counts.push(s.len());
        if let [s] = s.as_slice() {
            worst = worst
                .max((s.x - 2.0).abs())
                .max((s.mass - 4.0 * t).abs())
                .max(s.u_shock.abs());
        }
    }
    let passed = counts.iter().all(|&c| c == 1) && worst <= 1e-8;
    outcome(
        passed,
        format!("shock counts {counts:?}, max deviation {worst:.3e} (tol 1e-8)"),
    )
}

fn raref_fan() -> Outcome {
    let p = problem("raref-delta");
    let t = 0.5;
    let mut worst: f64 = 0.0;
    for i in 0..=200 {
        let x = 0.501 + (0.999 - 0.501) * i as f64 / 200.0;
        worst = worst.max((p.velocity(x, t).unwrap() - x / t).abs());
    }
    let interval = p.locate_interface_interval(t).unwrap();
    let (l, r) = interval.bounds.unwrap_or((f64::NAN, f64::NAN));
    let dev = (l - 0.5).abs().max((r - 1.0).abs());
    let passed = worst <= 1e-8 && dev <= 1e-6;
    outcome(
        passed,
        format!("fan error {worst:.3e} (tol 1e-8), interface [{l:.9}, {r:.9}] deviation {dev:.3e} (tol 1e-6)"),
    )
}

fn raref_phases() -> Outcome {
    let p = problem("raref-delta");
    let seed = interior(p.locate_shocks(1.0, (0.0, 4.0), 64).unwrap());
    let Some(seed) = seed.first() else {
        return outcome(false, "no shock at t = 1".into());
    };
    let path = match p.trace_shock_path(seed, 6.0, 0.005) {
        Ok(path) => path,
        Err(e) => return outcome(false, format!("trace failed: {e}")),
    };
    let t_a = 16.0 / 9.0;
    let t_b = 16.0 / 3.0;
    let (mut pos, mut mass): (f64, f64) = (0.0, 0.0);
    for q in path.points.iter().filter(|q| !q.at_boundary) {
        let (x, m) = if q.t <= t_a {
            (-2.0 * q.t + 4.0 * q.t.sqrt(), 4.0 * q.t.sqrt())
        } else {
            (-q.t / 2.0 + 8.0 / 3.0, 3.0 * q.t)
        };
        pos = pos.max((q.x - x).abs());
        mass = mass.max((q.mass - m).abs());
    }
    let absorbed = path.absorbed_at.unwrap_or(f64::NAN);
    let passed = path.end == PathEnd::Absorbed && pos <= 1e-6 && mass <= 1e-6 && (absorbed - t_b).abs() <= 1e-6;
    outcome(
        passed,
        format!("path error {pos:.3e}, mass error {mass:.3e}, absorption at {absorbed:.9} (target 16/3, tol 1e-6)"),
    )
}

fn raref_boundary() -> Outcome {
    let p = problem("raref-delta");
    let early: Vec<f64> = (1..=106).map(|k| 0.05 * k as f64).filter(|&t| t < 16.0 / 3.0).collect();
    let late: Vec<f64> = (0..=50)
        .map(|k| 16.0 / 3.0 + 1e-3 + (8.0 - 16.0 / 3.0 - 1e-3) * k as f64 / 50.0)
        .collect();
    let mut u_err: f64 = 0.0;
    for row in p.boundary_trace(&early).unwrap() {
        u_err = u_err.max((row.u_limit - 1.0).abs());
    }
    let mut atom_err: f64 = 0.0;
    for row in p.boundary_trace(&late).unwrap() {
        atom_err = atom_err.max((row.atom_mass - 3.0 * row.t).abs());
    }
    let exact_m = early
        .iter()
        .chain(&late)
        .all(|&t| p.mass_potential(0.0, t).unwrap() == -t);
    let passed = u_err <= 1e-6 && atom_err <= 1e-6 && exact_m;
    outcome(
        passed,
        format!("u(0+) error {u_err:.3e}, atom mass error {atom_err:.3e}, m(0,t) = -t exactly: {exact_m}"),
    )
}

fn two_deltas() -> Outcome {
    let p = problem("two-deltas");
    let seeds = interior(p.locate_shocks(1.25, (0.0, 3.0), 64).unwrap());
    let track = match p.trace_shock_paths(&seeds, 6.0, 0.005) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("trace failed: {e}")),
    };
    let Some(merge) = track.merges.first() else {
        return outcome(false, format!("no merge among {} paths", track.paths.len()));
    };
    let merge_err = (merge.x - 9.0 / 8.0).abs().max((merge.t - 7.0 / 4.0).abs());
    let mut order: Vec<usize> = (0..track.paths.len()).collect();
    order.sort_by(|&i, &j| track.paths[i].points[0].x.total_cmp(&track.paths[j].points[0].x));
    let mut pre_mass: f64 = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        for q in track.paths[i].points.iter().filter(|q| q.t < merge.t - 1e-9) {
            let target = if rank == 0 { q.t - 1.0 } else { 3.0 * q.t };
            pre_mass = pre_mass.max((q.mass - target).abs());
        }
    }
    let survivor = &track.paths[merge.into];
    let post: Vec<_> = survivor.points.iter().filter(|q| q.t > merge.t + 1e-9).collect();
    let mut stated: f64 = 0.0;
    let mut derived: f64 = 0.0;
    let mut post_mass: f64 = 0.0;
    for q in &post {
        post_mass = post_mass.max((q.mass - (4.0 * q.t - 1.0)).abs());
        if q.t >= 2.0 {
            stated = stated.max((q.x - (0.75 + 17.0 / (32.0 * q.t - 12.0))).abs());
            derived = derived.max((q.x - (0.75 + 9.0 / (16.0 * q.t - 4.0))).abs());
        }
    }
    let off_wall = track
        .paths
        .iter()
        .all(|path| path.end != PathEnd::Absorbed && path.points.iter().all(|q| q.x > 0.0));
    let reaches = post.last().is_some_and(|q| (q.t - 6.0).abs() < 1e-9);
    let passed = merge_err <= 1e-6 && stated <= 1e-8 && pre_mass <= 1e-6 && post_mass <= 1e-6 && off_wall && reaches;
    outcome(
        passed,
        format!(
            "merge ({:.9}, {:.9}) error {merge_err:.3e}; post-merge error vs 3/4+17/(32t-12) {stated:.3e} (tol 1e-8), \
             vs 3/4+9/(16t-4) {derived:.3e}; mass errors pre {pre_mass:.3e} post {post_mass:.3e}; stays off wall: {off_wall}",
            merge.x, merge.t
        ),
    )
}

fn takeoff() -> Outcome {
    let p = problem("boundary-takeoff");
    let target = 4.0 + 2.0 * 3.0f64.sqrt();
    let events = p.boundary_events(0.25, 12.0, 200).unwrap();
    let Some(dep) = events.iter().find(|e| e.kind == BoundaryEventKind::Departure) else {
        return outcome(false, "no departure".into());
    };
    let t_err = (dep.t - target).abs();
    let start = dep.t + 0.01;
    let seed = interior(p.locate_shocks(start, (0.0, 1.0), 64).unwrap());
    let Some(seed) = seed.first() else {
        return outcome(false, "no atom after departure".into());
    };
    let path = p.trace_shock_path(seed, 12.0, 0.01).unwrap();
    let mut curve: f64 = 0.0;
    for q in path.points.iter().filter(|q| q.x <= 2.0) {
        curve = curve.max((q.t - (q.x + 4.0 + 2.0 * 3.0f64.sqrt() * (q.x + 1.0).sqrt())).abs());
    }
    let covered = path.points.last().is_some_and(|q| q.x >= 2.0 - 1e-6);
    let mass_rel = (dep.mass - 6.0).abs() / 6.0;
    let passed = t_err <= 0.05 && curve <= 0.05 && covered && mass_rel <= 0.02;
    outcome(
        passed,
        format!(
            "departure t = {:.6} (error {t_err:.3e}, tol 0.05); path error {curve:.3e} (tol 0.05, reaches x = 2: {covered}); \
             departure mass {:.6} vs 6 ({:.1}% off, tol 2%)",
            dep.t,
            dep.mass,
            100.0 * mass_rel
        ),
    )
}

fn mu_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for sc in builtin_scenarios() {
        let p = sc.problem().unwrap();
        let (t0, t1) = sc.horizon;
        for _ in 0..50 {
            let t = rng.gen_range(t0..t1);
            let l = p.length_scale(t);
            let (a, b) = (rng.gen_range(0.0..l), rng.gen_range(0.0..l));
            let c = p.mu_identity_x(t, a.min(b), a.max(b)).unwrap();
            worst = worst.max(c.relative());
            let x = rng.gen_range(0.0..p.length_scale(t1));
            let (a, b) = (rng.gen_range(t0..t1), rng.gen_range(t0..t1));
            let c = p.mu_identity_t(x, a.min(b), a.max(b)).unwrap();
            worst = worst.max(c.relative());
            count += 2;
        }
    }
    outcome(
        worst <= 1e-6,
        format!("{count} windows, worst relative residual {worst:.3e} (tol 1e-6)"),
    )
}

fn conservation() -> Outcome {
    let mut mass_worst: f64 = 0.0;
    let mut eq_worst: f64 = 0.0;
    let (mut eq_n, mut ineq_n, mut ineq_bad, mut compact) = (0, 0, 0, 0);
    for sc in builtin_scenarios() {
        let p = sc.problem().unwrap();
        let (t0, t1) = sc.horizon;
        let x_max = 2.0 * p.length_scale(t1);
        if matches!(p.mass_balance(t1, x_max), Err(Error::NonCompactScenario { .. })) {
            continue;
        }
        compact += 1;
        for k in 0..20 {
            let t = t0 + (t1 - t0) * k as f64 / 19.0;
            mass_worst = mass_worst.max(p.mass_balance(t, x_max).unwrap().residual.abs());
            let r = p.momentum_balance(t, x_max).unwrap();
            match r.relation {
                Relation::Equality => {
                    eq_n += 1;
                    eq_worst = eq_worst.max(r.residual.abs());
                }
                _ => {
                    ineq_n += 1;
                    if !r.holds(0.0) {
                        ineq_bad += 1;
                    }
                }
            }
        }
        for t in [9.0, 10.0, 11.0] {
            let r = p.momentum_balance(t, x_max).unwrap();
            if r.relation == Relation::Equality {
                eq_n += 1;
                eq_worst = eq_worst.max(r.residual.abs());
            }
        }
    }
    let passed = compact > 0 && mass_worst <= 1e-6 && eq_n > 0 && eq_worst <= 1e-6 && ineq_bad == 0;
    outcome(
        passed,
        format!(
            "{compact} compact scenario(s); mass residual {mass_worst:.3e}; momentum equality {eq_n} times, residual \
             {eq_worst:.3e}; inequality {ineq_n} times, {ineq_bad} wrong direction"
        ),
    )
}

fn entropy() -> Outcome {
    let (mut checked, mut shocks, mut bad) = (0, 0, 0);
    for sc in builtin_scenarios() {
        let p = sc.problem().unwrap();
        let (t0, t1) = sc.horizon;
        for k in 0..34 {
            let t = t0 + (t1 - t0) * k as f64 / 33.0;
            let r = p.entropy_report(t, (0.0, p.length_scale(t)), 100).unwrap();
            checked += r.checked;
            shocks += r.shocks;
            bad += r.violations.len();
        }
    }
    outcome(
        checked >= 10_000 && bad == 0,
        format!("{checked} evaluations ({shocks} at atoms), {bad} violations"),
    )
}

fn radon_nikodym() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut worst_q, mut worst_e): (f64, f64) = (0.0, 0.0);
    let (mut used, mut skipped) = (0, 0);
    for sc in builtin_scenarios() {
        let p = sc.problem().unwrap();
        let (t0, t1) = sc.horizon;
        for _ in 0..1000 {
            let t = rng.gen_range(t0..t1);
            let x = rng.gen_range(1e-3..p.length_scale(t));
            let h = 1e-5;
            let v = p.field_samples(t, &[x, x + h]).unwrap();
            let dm = v[1].m - v[0].m;
            if dm <= 1e-12 * h {
                skipped += 1;
                continue;
            }
            let u = v[0].u;
            worst_q = worst_q.max(((v[1].q - v[0].q) / dm - u).abs());
            worst_e = worst_e.max(((v[1].e - v[0].e) / dm - 0.5 * u * u).abs());
            used += 1;
        }
    }
    let passed = worst_q <= 1e-4 && worst_e <= 1e-4 && used > 1000;
    outcome(
        passed,
        format!("{used} points ({skipped} in vacuum), shared-scan dq/dm error {worst_q:.3e}, dE/dm error {worst_e:.3e} (tol 1e-4, h = 1e-5)"),
    )
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let sc = &builtin_scenarios()[rng.gen_range(0..3)];
        let p = sc.problem().unwrap();
        let t = rng.gen_range(sc.horizon.0..sc.horizon.1);
        let x = rng.gen_range(0.0..p.length_scale(t));
        let s = p.potential_state(x, t).unwrap();
        let bf = brute_force_minimize(&p, Which::Initial, x, t, 100_000).unwrap();
        let bg = brute_force_minimize(&p, Which::Boundary, x, t, 100_000).unwrap();
        worst = worst
            .max((bf.value - s.f.value).abs() / s.f.scale)
            .max((bg.value - s.g.value).abs() / s.g.scale);
    }
    let p = problem("raref-delta");
    let mut grid: Vec<f64> = (0..10_000).map(|_| rng.gen_range(0.0..4.0)).collect();
    grid.sort_by(f64::total_cmp);
    let mut disc = Vec::new();
    for n in [10_000, 20_000] {
        let cfg = ParticleConfig::new(n, 0.5, 1.0 / n as f64);
        let run = sticky_particle_simulate(&p, &cfg).unwrap();
        disc.push(compare_mass_potential(&p, &run, 0.5, &grid).unwrap());
    }
    let passed = worst <= 1e-9 && disc[0] <= 1e-2 && disc[1] < disc[0];
    outcome(
        passed,
        format!(
            "brute force value gap {worst:.3e}·scale (tol 1e-9); particle sup |m̂ - m| {:.3e} (n=1e4), {:.3e} (n=2e4)",
            disc[0], disc[1]
        ),
    )
}

fn weak_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut worst, mut bad_rate) = (0.0f64, 0);
    let mut count = 0;
    for sc in builtin_scenarios() {
        let p = sc.problem().unwrap();
        for _ in 0..10 {
            let bump = random_bump(&p, &mut rng, sc.horizon).unwrap();
            let levels: Vec<_> = [64, 128, 256, 512]
                .iter()
                .map(|&n| p.weak_residual(&bump, n).unwrap())
                .collect();
            let fine = levels.last().unwrap();
            worst = worst.max(fine.max_abs());
            for w in levels.windows(2) {
                for (a, b) in [(w[0].r1.abs(), w[1].r1.abs()), (w[0].r2.abs(), w[1].r2.abs())] {
                    if a > 1e-10 && b > 1e-10 && b > a / 4.0 {
                        bad_rate += 1;
                    }
                }
            }
            count += 1;
        }
    }
    let passed = worst <= 1e-4 && bad_rate == 0;
    outcome(
        passed,
        format!("{count} bumps, worst residual at quad_n=512 {worst:.3e} (tol 1e-4), {bad_rate} doublings below 4x"),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("raref-delta statics", raref_statics),
        ("raref-delta fan", raref_fan),
        ("shock-path phases", raref_phases),
        ("boundary regime switch", raref_boundary),
        ("two-deltas merge and path", two_deltas),
        ("boundary-takeoff departure", takeoff),
        ("mu identities", mu_identities),
        ("conservation", conservation),
        ("entropy", entropy),
        ("Radon-Nikodym quotients", radon_nikodym),
        ("oracle equivalence", oracles),
        ("weak residuals", weak_residuals),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!(
            "{tag} criterion {:>2} {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
