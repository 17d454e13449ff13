//! Independent reference computations: grid minimization of the potentials
//! and a sticky-particle simulation.

mod brute_force;
mod particles;

pub use brute_force::{brute_force_minimize, Which};
pub use particles::{
    compare_mass_potential, sticky_particle_simulate, Particle, ParticleConfig, ParticleEvent, ParticleSystem,
    ParticleTrajectory,
};
