use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;

const WALL: usize = usize::MAX;
const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct ParticleConfig {
    pub n_particles: usize,
    pub t_end: f64,
    pub inject_dt: f64,
    /// Initial mass on `[0, extent)` is discretized; defaults to twice the
    /// problem length scale at `t_end`.
    pub extent: Option<f64>,
    /// Times at which the full system is recorded.
    pub snapshots: Vec<f64>,
}

impl ParticleConfig {
    pub fn new(n_particles: usize, t_end: f64, inject_dt: f64) -> Self {
        Self {
            n_particles,
            t_end,
            inject_dt,
            extent: None,
            snapshots: vec![t_end],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Particle {
    pub x: f64,
    pub mass: f64,
    pub momentum: f64,
}

impl Particle {
    pub fn velocity(&self) -> f64 {
        self.momentum / self.mass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParticleSystem {
    pub time: f64,
    /// Sorted by position.
    pub particles: Vec<Particle>,
    pub wall_mass: f64,
    pub wall_momentum: f64,
    /// Boundary mass injected so far, including what went into the wall.
    pub injected_mass: f64,
}

impl ParticleSystem {
    pub fn total_mass(&self) -> f64 {
        self.wall_mass + self.particles.iter().map(|p| p.mass).sum::<f64>()
    }

    /// Empirical mass potential with the convention `m(0, t) = −(injected mass)`.
    pub fn mass_potential(&self, x: f64) -> f64 {
        let inside: f64 = self.particles.iter().take_while(|p| p.x <= x).map(|p| p.mass).sum();
        -self.injected_mass + self.wall_mass + inside
    }
}

/// One collision, wall hit, or wall release: state of the resulting body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParticleEvent {
    pub t: f64,
    pub x: f64,
    pub mass: f64,
    pub velocity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParticleTrajectory {
    pub snapshots: Vec<ParticleSystem>,
    pub events: Vec<ParticleEvent>,
    /// Bodies released from the wall.
    pub departures: Vec<ParticleEvent>,
}

impl ParticleTrajectory {
    pub fn snapshot_at(&self, t: f64) -> Option<&ParticleSystem> {
        self.snapshots.iter().find(|s| (s.time - t).abs() <= 1e-12 * (1.0 + t))
    }
}

#[derive(Clone, Copy)]
struct Body {
    x0: f64,
    t0: f64,
    mass: f64,
    momentum: f64,
    prev: usize,
    next: usize,
    version: u64,
    alive: bool,
}

impl Body {
    fn velocity(&self) -> f64 {
        self.momentum / self.mass
    }

    fn at(&self, t: f64) -> f64 {
        self.x0 + self.velocity() * (t - self.t0)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Event {
    t: f64,
    a: usize,
    b: usize,
    va: u64,
    vb: u64,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .t
            .total_cmp(&self.t)
            .then_with(|| other.a.cmp(&self.a))
            .then_with(|| other.b.cmp(&self.b))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Sim<'a> {
    problem: &'a Problem,
    bodies: Vec<Body>,
    head: usize,
    heap: BinaryHeap<Event>,
    wall_mass: f64,
    wall_momentum: f64,
    injected: f64,
    t_end: f64,
    events: Vec<ParticleEvent>,
    departures: Vec<ParticleEvent>,
}

impl Sim<'_> {
    fn schedule_pair(&mut self, a: usize, b: usize, now: f64) {
        if a == NONE || b == NONE {
            return;
        }
        let (ba, bb) = (self.bodies[a], self.bodies[b]);
        let (va, vb) = (ba.velocity(), bb.velocity());
        if va <= vb {
            return;
        }
        let gap = (bb.at(now) - ba.at(now)).max(0.0);
        let t = now + gap / (va - vb);
        if t <= self.t_end {
            self.heap.push(Event {
                t,
                a,
                b,
                va: ba.version,
                vb: bb.version,
            });
        }
    }

    fn schedule_wall(&mut self, now: f64) {
        let h = self.head;
        if h == NONE {
            return;
        }
        let b = self.bodies[h];
        let v = b.velocity();
        if v >= 0.0 {
            return;
        }
        let t = now + b.at(now).max(0.0) / -v;
        if t <= self.t_end {
            self.heap.push(Event {
                t,
                a: h,
                b: WALL,
                va: b.version,
                vb: 0,
            });
        }
    }

    fn valid(&self, e: &Event) -> bool {
        let a = &self.bodies[e.a];
        if !a.alive || a.version != e.va {
            return false;
        }
        if e.b == WALL {
            return self.head == e.a;
        }
        let b = &self.bodies[e.b];
        b.alive && b.version == e.vb && a.next == e.b
    }

    fn unlink(&mut self, i: usize) {
        let (p, n) = (self.bodies[i].prev, self.bodies[i].next);
        if p != NONE {
            self.bodies[p].next = n;
        } else {
            self.head = n;
        }
        if n != NONE {
            self.bodies[n].prev = p;
        }
        self.bodies[i].alive = false;
    }

    fn merge(&mut self, a: usize, b: usize, t: f64) {
        let x = self.bodies[a].at(t);
        let (mb, pb) = (self.bodies[b].mass, self.bodies[b].momentum);
        self.unlink(b);
        let body = &mut self.bodies[a];
        body.x0 = x;
        body.t0 = t;
        body.mass += mb;
        body.momentum += pb;
        body.version += 1;
        let ev = ParticleEvent {
            t,
            x,
            mass: body.mass,
            velocity: body.velocity(),
        };
        self.events.push(ev);
        let (p, n) = (body.prev, body.next);
        self.schedule_pair(p, a, t);
        self.schedule_pair(a, n, t);
        if p == NONE {
            self.schedule_wall(t);
        }
    }

    fn hit_wall(&mut self, a: usize, t: f64) {
        let b = self.bodies[a];
        self.wall_mass += b.mass;
        self.wall_momentum += b.momentum;
        self.unlink(a);
        self.events.push(ParticleEvent {
            t,
            x: 0.0,
            mass: self.wall_mass,
            velocity: 0.0,
        });
        self.schedule_wall(t);
    }

    /// Adds a body left of every other body and merges it on contact.
    fn push_front(&mut self, x: f64, mass: f64, momentum: f64, t: f64) {
        let i = self.bodies.len();
        let next = self.head;
        self.bodies.push(Body {
            x0: x,
            t0: t,
            mass,
            momentum,
            prev: NONE,
            next,
            version: 0,
            alive: true,
        });
        if next != NONE {
            self.bodies[next].prev = i;
        }
        self.head = i;
        if next != NONE && self.bodies[next].at(t) <= x {
            self.merge(i, next, t);
        } else {
            self.schedule_pair(i, next, t);
            self.schedule_wall(t);
        }
    }

    fn inject(&mut self, t0: f64, t1: f64) {
        let b = self.problem.boundary();
        let mass = b.moment_between(t0, t1, 1, 0);
        let momentum = b.moment_between(t0, t1, 2, 0);
        if mass <= 0.0 {
            return;
        }
        self.injected += mass;
        if self.wall_mass > 0.0 {
            self.wall_mass += mass;
            self.wall_momentum += momentum;
            return;
        }
        let x = (t1 * momentum - b.moment_between(t0, t1, 2, 1)) / mass;
        self.push_front(x.max(0.0), mass, momentum, t1);
    }

    fn release(&mut self, t: f64) {
        if self.wall_mass > 0.0 && self.wall_momentum > 0.0 && !self.problem.wall_holds(t) {
            let (m, p) = (self.wall_mass, self.wall_momentum);
            self.wall_mass = 0.0;
            self.wall_momentum = 0.0;
            let ev = ParticleEvent {
                t,
                x: 0.0,
                mass: m,
                velocity: p / m,
            };
            self.departures.push(ev);
            self.events.push(ev);
            self.push_front(0.0, m, p, t);
        }
    }

    fn snapshot(&self, t: f64) -> ParticleSystem {
        let mut particles = Vec::new();
        let mut i = self.head;
        while i != NONE {
            let b = &self.bodies[i];
            particles.push(Particle {
                x: b.at(t),
                mass: b.mass,
                momentum: b.momentum,
            });
            i = b.next;
        }
        ParticleSystem {
            time: t,
            particles,
            wall_mass: self.wall_mass,
            wall_momentum: self.wall_momentum,
            injected_mass: self.injected,
        }
    }
}

/// Event-driven sticky particles with boundary injection and a sticky wall at `x = 0`.
pub fn sticky_particle_simulate(problem: &Problem, config: &ParticleConfig) -> Result<ParticleTrajectory> {
    let n = config.n_particles;
    if n < 10 {
        return Err(Error::OutOfRange {
            name: "n_particles",
            value: n as f64,
        });
    }
    if !(config.inject_dt > 0.0) {
        return Err(Error::OutOfRange {
            name: "inject_dt",
            value: config.inject_dt,
        });
    }
    if !(config.t_end > 0.0) {
        return Err(Error::OutOfRange {
            name: "t_end",
            value: config.t_end,
        });
    }
    let p = problem.initial();
    let extent = config
        .extent
        .unwrap_or_else(|| 2.0 * problem.length_scale(config.t_end));
    let total = p.moment(extent, 0, 0);
    let dm = total / n as f64;
    let mut bodies = Vec::with_capacity(2 * n);
    let mut lo = 0.0;
    for k in 0..n {
        let hi = if k + 1 == n {
            extent
        } else {
            p.inverse_mass(dm * (k + 1) as f64).min(extent)
        };
        let mass = p.moment_between(lo, hi, 0, 0);
        if mass > 0.0 {
            let idx = bodies.len();
            bodies.push(Body {
                x0: p.moment_between(lo, hi, 0, 1) / mass,
                t0: 0.0,
                mass,
                momentum: p.moment_between(lo, hi, 1, 0),
                prev: if idx == 0 { NONE } else { idx - 1 },
                next: idx + 1,
                version: 0,
                alive: true,
            });
        }
        lo = hi;
    }
    if let Some(last) = bodies.last_mut() {
        last.next = NONE;
    }
    let head = if bodies.is_empty() { NONE } else { 0 };
    let mut sim = Sim {
        problem,
        bodies,
        head,
        heap: BinaryHeap::new(),
        wall_mass: 0.0,
        wall_momentum: 0.0,
        injected: 0.0,
        t_end: config.t_end,
        events: Vec::new(),
        departures: Vec::new(),
    };
    for i in 0..sim.bodies.len().saturating_sub(1) {
        sim.schedule_pair(i, i + 1, 0.0);
    }
    sim.schedule_wall(0.0);

    let mut shots: Vec<f64> = config
        .snapshots
        .iter()
        .copied()
        .filter(|&s| s >= 0.0 && s <= config.t_end)
        .collect();
    shots.sort_by(f64::total_cmp);
    shots.dedup();
    let mut snapshots = Vec::with_capacity(shots.len());
    let mut next_shot = 0;
    let limit = 64 * (n + (config.t_end / config.inject_dt) as usize + 16);
    let mut processed = 0usize;
    let mut k = 0usize;
    loop {
        let inject_at = (k + 1) as f64 * config.inject_dt;
        let shot_at = shots.get(next_shot).copied().unwrap_or(f64::INFINITY);
        let stop = inject_at.min(shot_at).min(config.t_end);
        while let Some(e) = sim.heap.peek().copied() {
            if e.t > stop {
                break;
            }
            sim.heap.pop();
            if !sim.valid(&e) {
                continue;
            }
            processed += 1;
            if processed > limit {
                return Err(Error::EventQueueOverflow { limit });
            }
            if e.b == WALL {
                sim.hit_wall(e.a, e.t);
            } else {
                sim.merge(e.a, e.b, e.t);
            }
        }
        if inject_at <= stop {
            sim.inject(k as f64 * config.inject_dt, inject_at);
            k += 1;
            sim.release(inject_at);
        }
        if shot_at <= stop {
            snapshots.push(sim.snapshot(shot_at));
            next_shot += 1;
        }
        if stop >= config.t_end {
            break;
        }
    }
    Ok(ParticleTrajectory {
        snapshots,
        events: sim.events,
        departures: sim.departures,
    })
}

/// Sup-norm distance between the empirical and exact mass potentials at time `t`.
pub fn compare_mass_potential(
    problem: &Problem,
    trajectory: &ParticleTrajectory,
    t: f64,
    x_grid: &[f64],
) -> Result<f64> {
    let snap = trajectory
        .snapshot_at(t)
        .ok_or(Error::OutOfRange { name: "t", value: t })?;
    let mut worst: f64 = 0.0;
    for &x in x_grid {
        let exact = problem.mass_potential(x, t)?;
        worst = worst.max((snap.mass_potential(x) - exact).abs());
    }
    Ok(worst)
}
