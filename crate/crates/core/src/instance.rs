//! Seeded random instances.
//!
//! Values are drawn uniformly and rounded to four decimals so generated
//! scenarios print and re-parse without loss.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Job, Machine};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub machines: usize,
    /// Number of jobs; zero generates divisible work instead.
    pub jobs: usize,
    /// Speeds in `[1, max_speed]` instead of all 1.
    pub different_speeds: bool,
    /// Draw idle power over the whole power range rather than `[0, mu]`.
    pub idle_above_working: bool,
    pub max_power: f64,
    pub max_speed: f64,
    pub max_psi: f64,
    pub max_work: f64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            machines: 4,
            jobs: 0,
            different_speeds: false,
            idle_above_working: false,
            max_power: 100.0,
            max_speed: 4.0,
            max_psi: 100.0,
            max_work: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub machines: Vec<Machine>,
    pub jobs: Vec<Job>,
    /// Sum of job weights, or the drawn divisible work when there are no jobs.
    pub total_work: f64,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// Draws an instance; the same parameters and seed always give the same instance.
pub fn generate(spec: &InstanceSpec, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let machines = (0..spec.machines)
        .map(|i| {
            let mu = round4(rng.gen_range(0.0..=spec.max_power));
            let gamma_max = if spec.idle_above_working {
                spec.max_power
            } else {
                mu
            };
            let gamma = round4(rng.gen_range(0.0..=gamma_max));
            let upsilon = if spec.different_speeds {
                round4(rng.gen_range(1.0..=spec.max_speed))
            } else {
                1.0
            };
            Machine::new(format!("m{}", i + 1), mu, gamma, upsilon)
        })
        .collect();
    let jobs: Vec<Job> = (0..spec.jobs)
        .map(|j| {
            let psi = round4(rng.gen_range(1.0..=spec.max_psi));
            Job::new(format!("p{}", j + 1), psi)
        })
        .collect();
    let total_work = if jobs.is_empty() {
        round4(rng.gen_range(0.0..spec.max_work)).max(1e-4)
    } else {
        jobs.iter().map(|j| j.psi).sum()
    };
    Instance {
        machines,
        jobs,
        total_work,
    }
}
