use pgd_core::oracle::{brute_force_minimize, Which};
use pgd_core::{builtin, BoundaryEventKind, PiecewiseProfile, Problem, ProfileKind, Segment};
use proptest::prelude::*;

fn two_segment(split: f64, r: (f64, f64), u: (f64, f64), ub: f64) -> Problem {
    let initial = PiecewiseProfile::build(
        ProfileKind::Initial,
        &[Segment::new(Some(split), r.0, u.0), Segment::new(None, r.1, u.1)],
    )
    .unwrap();
    let boundary = PiecewiseProfile::build(ProfileKind::Boundary, &[Segment::new(None, 1.0, ub)]).unwrap();
    Problem::new(initial, boundary).unwrap()
}

fn arb_problem() -> impl Strategy<Value = Problem> {
    (
        0.5..3.0f64,
        0.2..2.0f64,
        0.2..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        0.2..2.0f64,
    )
        .prop_map(|(split, r0, r1, u0, u1, ub)| two_segment(split, (r0, r1), (u0, u1), ub))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_potential_is_nondecreasing(p in arb_problem(), t in 0.1..3.0f64, a in 0.0..6.0f64, d in 0.0..2.0f64) {
        let m1 = p.mass_potential(a, t).unwrap();
        let m2 = p.mass_potential(a + d, t).unwrap();
        prop_assert!(m2 >= m1 - 1e-12 * (1.0 + m1.abs()));
    }

    #[test]
    fn exact_minimum_matches_brute_force(p in arb_problem(), t in 0.1..3.0f64, x in 0.0..6.0f64) {
        let s = p.potential_state(x, t).unwrap();
        let bf = brute_force_minimize(&p, Which::Initial, x, t, 20_000).unwrap();
        let bg = brute_force_minimize(&p, Which::Boundary, x, t, 20_000).unwrap();
        prop_assert!(s.f.value <= bf.value + 1e-9 * s.f.scale);
        prop_assert!((s.f.value - bf.value).abs() <= 1e-9 * s.f.scale);
        prop_assert!((s.g.value - bg.value).abs() <= 1e-9 * s.g.scale);
    }

    #[test]
    fn velocity_lies_in_data_hull(p in arb_problem(), t in 0.1..3.0f64, x in 0.0..6.0f64) {
        let (lo, hi) = p.velocity_hull();
        let u = p.velocity(x, t).unwrap();
        let fan = x / t;
        prop_assert!((u >= lo - 1e-9 && u <= hi + 1e-9) || (u - fan).abs() < 1e-9);
    }

    #[test]
    fn entropy_holds_on_random_slices(p in arb_problem(), t in 0.1..3.0f64) {
        let r = p.entropy_report(t, (0.0, p.length_scale(t)), 64).unwrap();
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}

#[test]
fn merged_atom_follows_the_conservation_curve() {
    let p = builtin("two-deltas").unwrap().problem().unwrap();
    let seeds: Vec<_> = p
        .locate_shocks(1.25, (0.0, 3.0), 64)
        .unwrap()
        .into_iter()
        .filter(|s| !s.at_boundary)
        .collect();
    let track = p.trace_shock_paths(&seeds, 6.0, 0.01).unwrap();
    let merge = track.merges[0];
    let path = &track.paths[merge.into];
    let late: Vec<_> = path.points.iter().filter(|q| q.t >= 2.0).collect();
    assert!(late.len() > 300);
    for q in late {
        assert!((q.x - (0.75 + 9.0 / (16.0 * q.t - 4.0))).abs() < 1e-8, "t = {}", q.t);
        assert!((q.mass - (4.0 * q.t - 1.0)).abs() < 1e-8);
    }
}

#[test]
fn departing_atom_carries_all_collected_mass() {
    let p = builtin("boundary-takeoff").unwrap().problem().unwrap();
    let events = p.boundary_events(0.25, 12.0, 200).unwrap();
    let dep = events.iter().find(|e| e.kind == BoundaryEventKind::Departure).unwrap();
    let t_d = 4.0 + 2.0 * 3.0f64.sqrt();
    assert!((dep.t - t_d).abs() < 1e-6);
    assert!((dep.mass - (2.0 + t_d)).abs() < 1e-6);
}

#[test]
fn uniform_flow_has_no_atoms() {
    let p = two_segment(1.0, (1.0, 1.0), (1.0, 1.0), 1.0);
    for t in [0.5, 1.0, 4.0] {
        assert!(p.locate_shocks(t, (0.0, 10.0), 64).unwrap().is_empty());
        assert_eq!(p.velocity(3.0, t).unwrap(), 1.0);
    }
}
