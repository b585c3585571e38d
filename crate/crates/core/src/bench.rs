//! Seeded method comparisons on synthetic instances.
//!
//! Each instance is generated from `master_seed + index`, solved by every
//! configured method, and optionally checked against the brute-force oracle.
//! The single-scale ICM baseline is budget matched: it gets the same number
//! of restarts as the multiscale solver and a per-restart sweep cap that
//! brings its total sweep budget up to what the multiscale run actually
//! spent.

use std::time::Instant;

use crate::error::Result;
use crate::icm::{sample_low_energy, IcmParams};
use crate::pyramid::{solve_multiscale, PyramidParams};
use crate::synth::{brute_force_min_with_limit, generate_synthetic, state_count, SyntheticParams};

const SINGLE_SCALE_SEED_SALT: u64 = 0x517c_c1b7_2722_0a95;

/// A method under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Multiscale,
    SingleScaleIcm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Multiscale => "multiscale",
            Method::SingleScaleIcm => "icm",
        }
    }
}

/// Benchmark configuration.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub instances: usize,
    /// Instance template; its seed is the master seed, instance `k` is
    /// generated from `master_seed + k`.
    pub template: SyntheticParams,
    /// Solver parameters; the per-instance seed overrides `pyramid.seed`.
    pub pyramid: PyramidParams,
    pub methods: Vec<Method>,
    /// Record the exact optimum whenever the state space allows it.
    pub oracle: bool,
    pub oracle_limit: u64,
}

impl BenchConfig {
    pub fn new(instances: usize, template: SyntheticParams) -> Self {
        BenchConfig {
            instances,
            template,
            pyramid: PyramidParams::default(),
            methods: vec![Method::Multiscale, Method::SingleScaleIcm],
            oracle: false,
            oracle_limit: crate::synth::DEFAULT_BRUTE_FORCE_LIMIT,
        }
    }
}

/// One method's result on one instance.
#[derive(Clone, Copy, Debug)]
pub struct MethodOutcome {
    pub method: Method,
    pub energy: f64,
    pub sweeps: usize,
}

/// One instance's record.
#[derive(Clone, Debug)]
pub struct InstanceRecord {
    pub index: usize,
    pub seed: u64,
    pub outcomes: Vec<MethodOutcome>,
    pub optimum: Option<f64>,
}

/// Aggregated benchmark results.
#[derive(Clone, Debug)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub records: Vec<InstanceRecord>,
    /// Accumulated wall-clock seconds per method. Informational only; not
    /// part of the serialized report, which must be reproducible byte for
    /// byte from the seed.
    pub wall_clock: Vec<(Method, f64)>,
}

impl BenchReport {
    fn outcomes(&self, method: Method) -> impl Iterator<Item = &MethodOutcome> {
        self.records
            .iter()
            .flat_map(move |r| r.outcomes.iter().filter(move |o| o.method == method))
    }

    pub fn mean_energy(&self, method: Method) -> Option<f64> {
        let energies: Vec<f64> = self.outcomes(method).map(|o| o.energy).collect();
        (!energies.is_empty()).then(|| energies.iter().sum::<f64>() / energies.len() as f64)
    }

    /// Mean relative gap `(E - E*) / (1 + |E*|)` over oracle-checked
    /// instances.
    pub fn mean_gap(&self, method: Method) -> Option<f64> {
        let mut gaps = Vec::new();
        for record in &self.records {
            let Some(optimum) = record.optimum else {
                continue;
            };
            for outcome in record.outcomes.iter().filter(|o| o.method == method) {
                gaps.push((outcome.energy - optimum) / (1.0 + optimum.abs()));
            }
        }
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
    }

    /// Fraction of oracle-checked instances solved to optimality.
    pub fn optimum_rate(&self, method: Method) -> Option<f64> {
        let mut hits = 0usize;
        let mut total = 0usize;
        for record in &self.records {
            let Some(optimum) = record.optimum else {
                continue;
            };
            for outcome in record.outcomes.iter().filter(|o| o.method == method) {
                total += 1;
                if outcome.energy <= optimum + 1e-9 * (1.0 + optimum.abs()) {
                    hits += 1;
                }
            }
        }
        (total > 0).then(|| hits as f64 / total as f64)
    }

    /// Mean-energy improvement of `a` over `b` (positive when `a` is lower).
    pub fn margin(&self, a: Method, b: Method) -> Option<f64> {
        Some(self.mean_energy(b)? - self.mean_energy(a)?)
    }
}

/// Runs every configured method on every seeded instance.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    let mut records = Vec::with_capacity(config.instances);
    let mut clock: Vec<(Method, f64)> = config.methods.iter().map(|&m| (m, 0.0)).collect();
    for index in 0..config.instances {
        let seed = config.template.seed.wrapping_add(index as u64);
        let energy = generate_synthetic(&SyntheticParams {
            seed,
            ..config.template
        });

        let optimum = if config.oracle
            && matches!(state_count(&energy), Some(s) if s <= config.oracle_limit as u128)
        {
            Some(brute_force_min_with_limit(&energy, config.oracle_limit)?.1)
        } else {
            None
        };

        // Multiscale runs first so its sweep count can set the single-scale
        // budget, but outcomes keep the configured method order.
        let mut multiscale: Option<MethodOutcome> = None;
        if config.methods.contains(&Method::Multiscale) {
            let started = Instant::now();
            let report = solve_multiscale(
                &energy,
                &PyramidParams {
                    seed,
                    ..config.pyramid.clone()
                },
            )?;
            let elapsed = started.elapsed().as_secs_f64();
            if let Some(entry) = clock.iter_mut().find(|(m, _)| *m == Method::Multiscale) {
                entry.1 += elapsed;
            }
            multiscale = Some(MethodOutcome {
                method: Method::Multiscale,
                energy: report.final_energy,
                sweeps: report.total_sweeps,
            });
        }

        let mut outcomes = Vec::with_capacity(config.methods.len());
        for &method in &config.methods {
            match method {
                Method::Multiscale => outcomes.push(multiscale.expect("computed above")),
                Method::SingleScaleIcm => {
                    let restarts = config.pyramid.refine.restarts.max(1);
                    let budget = multiscale
                        .map(|o| o.sweeps)
                        .unwrap_or(restarts * config.pyramid.refine.max_sweeps);
                    let per_restart = budget.div_ceil(restarts).max(1);
                    let started = Instant::now();
                    let samples = sample_low_energy(
                        &energy,
                        &IcmParams {
                            restarts,
                            sweeps_per_sample: per_restart,
                            seed: seed ^ SINGLE_SCALE_SEED_SALT,
                            ..config.pyramid.refine
                        },
                    )?;
                    let elapsed = started.elapsed().as_secs_f64();
                    if let Some(entry) = clock.iter_mut().find(|(m, _)| *m == method) {
                        entry.1 += elapsed;
                    }
                    let (_, best_energy) = samples.best().expect("at least one restart");
                    outcomes.push(MethodOutcome {
                        method,
                        energy: best_energy,
                        sweeps: samples.total_sweeps(),
                    });
                }
            }
        }
        records.push(InstanceRecord {
            index,
            seed,
            outcomes,
            optimum,
        });
    }
    Ok(BenchReport {
        config: config.clone(),
        records,
        wall_clock: clock,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_instances_hit_the_oracle() {
        let mut config = BenchConfig::new(
            1,
            SyntheticParams {
                rows: 1,
                cols: 1,
                labels: 4,
                lambda: 10.0,
                seed: 5,
            },
        );
        config.oracle = true;
        let report = run_benchmark(&config).unwrap();
        assert_eq!(report.records.len(), 1);
        let record = &report.records[0];
        let optimum = record.optimum.unwrap();
        for outcome in &record.outcomes {
            assert_eq!(outcome.energy, optimum);
        }
        assert_eq!(report.mean_gap(Method::Multiscale), Some(0.0));
        assert_eq!(report.mean_gap(Method::SingleScaleIcm), Some(0.0));
        assert_eq!(report.optimum_rate(Method::Multiscale), Some(1.0));
    }

    #[test]
    fn zero_lambda_instances_are_separable_and_exact() {
        let mut config = BenchConfig::new(
            3,
            SyntheticParams {
                rows: 2,
                cols: 2,
                labels: 3,
                lambda: 0.0,
                seed: 50,
            },
        );
        config.oracle = true;
        let report = run_benchmark(&config).unwrap();
        for record in &report.records {
            let optimum = record.optimum.unwrap();
            for outcome in &record.outcomes {
                assert_eq!(outcome.energy, optimum, "method {:?}", outcome.method);
            }
        }
    }

    #[test]
    fn benchmark_is_deterministic() {
        let mut config = BenchConfig::new(
            4,
            SyntheticParams {
                rows: 3,
                cols: 3,
                labels: 3,
                lambda: 10.0,
                seed: 7,
            },
        );
        config.oracle = true;
        let a = run_benchmark(&config).unwrap();
        let b = run_benchmark(&config).unwrap();
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.seed, rb.seed);
            assert_eq!(ra.optimum, rb.optimum);
            for (oa, ob) in ra.outcomes.iter().zip(&rb.outcomes) {
                assert_eq!(oa.energy, ob.energy);
                assert_eq!(oa.sweeps, ob.sweeps);
            }
        }
    }

    #[test]
    fn no_method_beats_the_oracle() {
        let mut config = BenchConfig::new(
            10,
            SyntheticParams {
                rows: 3,
                cols: 3,
                labels: 3,
                lambda: 10.0,
                seed: 90,
            },
        );
        config.oracle = true;
        let report = run_benchmark(&config).unwrap();
        for record in &report.records {
            let optimum = record.optimum.unwrap();
            for outcome in &record.outcomes {
                assert!(outcome.energy >= optimum);
            }
        }
        assert!(report.mean_gap(Method::Multiscale).unwrap() >= 0.0);
    }

    #[test]
    fn margin_is_mean_difference() {
        let config = BenchConfig::new(
            2,
            SyntheticParams {
                rows: 4,
                cols: 4,
                labels: 3,
                lambda: 10.0,
                seed: 33,
            },
        );
        let report = run_benchmark(&config).unwrap();
        let multiscale = report.mean_energy(Method::Multiscale).unwrap();
        let single = report.mean_energy(Method::SingleScaleIcm).unwrap();
        assert_eq!(
            report.margin(Method::Multiscale, Method::SingleScaleIcm),
            Some(single - multiscale)
        );
    }
}
