//! Wall-clock timings of the solvers on generated instances.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use emsched::instance::{generate, InstanceSpec};
use emsched::nondivisible::solve_nondivisible;
use emsched::{index_different, index_identical, solve_divisible, validate_fleet, Fleet};

/// Largest `t(10x) / t(x)` still called near-linear; an `x log x` sort gives about 12.5.
pub const NEAR_LINEAR_LIMIT: f64 = 30.0;

pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub lpt_machines: usize,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub solver: &'static str,
    pub size: usize,
    pub millis: f64,
    /// Time over the time at the previous size.
    pub growth: Option<f64>,
    /// Size over the previous size.
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub repeats: usize,
    pub lpt_machines: usize,
    pub timings: Vec<Timing>,
    /// Whether each divisible step grew by at most `NEAR_LINEAR_LIMIT` for a 10x size step.
    pub divisible_near_linear: bool,
}

fn best_of<T>(repeats: usize, mut f: impl FnMut() -> T) -> Duration {
    (0..repeats)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed()
        })
        .min()
        .unwrap_or_default()
}

fn fleet(machines: usize, different_speeds: bool, seed: u64) -> (Fleet, f64) {
    let inst = generate(
        &InstanceSpec {
            machines,
            different_speeds,
            ..InstanceSpec::default()
        },
        seed,
    );
    (
        validate_fleet(inst.machines).expect("generated fleet"),
        inst.total_work,
    )
}

fn series(
    solver: &'static str,
    sizes: &[usize],
    mut time: impl FnMut(usize) -> Duration,
) -> Vec<Timing> {
    let mut out: Vec<Timing> = Vec::new();
    for &size in sizes {
        let millis = time(size).as_secs_f64() * 1e3;
        let (growth, reference) = match out.last() {
            Some(prev) => (
                Some(millis / prev.millis.max(1e-9)),
                Some(size as f64 / prev.size as f64),
            ),
            None => (None, None),
        };
        out.push(Timing {
            solver,
            size,
            millis,
            growth,
            reference,
        });
    }
    out
}

pub fn run_bench(config: &BenchConfig) -> BenchResult {
    let mut sizes = config.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let repeats = config.repeats;
    let seed = config.seed;

    let mut timings = series("divisible_identical", &sizes, |m| {
        let (f, w) = fleet(m, false, seed);
        best_of(repeats, || {
            solve_divisible(&index_identical(&f), w).unwrap()
        })
    });
    timings.extend(series("divisible_different", &sizes, |m| {
        let (f, w) = fleet(m, true, seed);
        best_of(repeats, || {
            solve_divisible(&index_different(&f), w).unwrap()
        })
    }));
    for (solver, different) in [("lpt_identical", false), ("lpt_different", true)] {
        timings.extend(series(solver, &sizes, |n| {
            let inst = generate(
                &InstanceSpec {
                    machines: config.lpt_machines,
                    jobs: n,
                    different_speeds: different,
                    ..InstanceSpec::default()
                },
                seed,
            );
            let f = validate_fleet(inst.machines).expect("generated fleet");
            let ix = if different {
                index_different(&f)
            } else {
                index_identical(&f)
            };
            best_of(repeats, || solve_nondivisible(&ix, &inst.jobs).unwrap())
        }));
    }

    let divisible_near_linear = timings
        .iter()
        .filter(|t| t.solver.starts_with("divisible"))
        .all(|t| match (t.growth, t.reference) {
            (Some(g), Some(r)) => g <= NEAR_LINEAR_LIMIT * r / 10.0,
            _ => true,
        });
    BenchResult {
        repeats,
        lpt_machines: config.lpt_machines,
        timings,
        divisible_near_linear,
    }
}

impl BenchResult {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "best of {} runs; LPT runs use {} machines",
            self.repeats, self.lpt_machines
        );
        let _ = writeln!(
            out,
            "{:<22} {:>10} {:>12} {:>10} {:>10}",
            "solver", "size", "ms", "growth", "size x"
        );
        for t in &self.timings {
            let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
            let _ = writeln!(
                out,
                "{:<22} {:>10} {:>12.3} {:>10} {:>10}",
                t.solver,
                t.size,
                t.millis,
                fmt(t.growth),
                fmt(t.reference)
            );
        }
        let _ = writeln!(
            out,
            "divisible solvers near-linear: {}",
            if self.divisible_near_linear {
                "yes"
            } else {
                "no"
            }
        );
        out
    }
}
