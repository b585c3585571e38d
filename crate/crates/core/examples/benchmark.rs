//! Seeded comparison of the multiscale solver against budget-matched
//! single-scale ICM, with exact optima on oracle-sized instances.

use energy_pyramid::bench::{run_benchmark, BenchConfig, Method};
use energy_pyramid::synth::SyntheticParams;

fn main() -> energy_pyramid::Result<()> {
    // Small grids first: the brute-force oracle is feasible, so the report
    // carries exact relative gaps and optimum rates.
    let mut config = BenchConfig::new(
        20,
        SyntheticParams {
            rows: 3,
            cols: 3,
            labels: 3,
            lambda: 10.0,
            seed: 1,
        },
    );
    config.oracle = true;
    let report = run_benchmark(&config)?;
    println!("3x3, l=3, lambda=10, 20 instances, oracle on:");
    for &method in &[Method::Multiscale, Method::SingleScaleIcm] {
        println!(
            "  {:<10} mean {:>9.4}  gap {:.4}  optimum rate {:.2}",
            method.as_str(),
            report.mean_energy(method).unwrap(),
            report.mean_gap(method).unwrap(),
            report.optimum_rate(method).unwrap(),
        );
    }

    // Larger contrast-enhancing grids: no oracle, compare means directly.
    for lambda in [5.0, 10.0, 15.0] {
        let config = BenchConfig::new(
            20,
            SyntheticParams {
                rows: 20,
                cols: 20,
                labels: 5,
                lambda,
                seed: 100,
            },
        );
        let report = run_benchmark(&config)?;
        let multiscale = report.mean_energy(Method::Multiscale).unwrap();
        let single = report.mean_energy(Method::SingleScaleIcm).unwrap();
        println!(
            "20x20, l=5, lambda={lambda:>4}: multiscale {multiscale:>10.2}  icm {single:>10.2}  margin {:>7.2}",
            report.margin(Method::Multiscale, Method::SingleScaleIcm).unwrap()
        );
    }
    Ok(())
}
