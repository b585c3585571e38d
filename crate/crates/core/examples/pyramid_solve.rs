//! Full coarse-to-fine solve of a contrast-enhancing grid energy, printing
//! the pyramid shape and the per-level refinement trace.

use energy_pyramid::pyramid::{build_pyramid, solve_multiscale, PyramidParams};
use energy_pyramid::synth::{generate_synthetic, SyntheticParams};

fn main() -> energy_pyramid::Result<()> {
    let energy = generate_synthetic(&SyntheticParams {
        rows: 50,
        cols: 50,
        labels: 5,
        lambda: 10.0,
        seed: 42,
    });
    println!(
        "energy: {} variables, {} edges, {} labels",
        energy.num_vars(),
        energy.weights.len(),
        energy.num_labels()
    );

    let params = PyramidParams {
        seed: 42,
        ..PyramidParams::default()
    };
    let pyramid = build_pyramid(&energy, &params)?;
    println!(
        "pyramid: {} levels, termination {}",
        pyramid.levels.len(),
        pyramid.termination.as_str()
    );
    for (s, level) in pyramid.levels.iter().enumerate() {
        println!(
            "  level {s}: {} variables, {} stored edges",
            level.num_vars(),
            level.weights.len()
        );
    }

    let report = solve_multiscale(&energy, &params)?;
    println!("solve (coarsest level first):");
    for stats in &report.per_level {
        println!(
            "  n {:>5}  energy {:>12.4}  sweeps {}",
            stats.num_vars, stats.energy, stats.sweeps
        );
    }
    println!(
        "final energy {:.4} after {} total sweeps",
        report.final_energy, report.total_sweeps
    );
    Ok(())
}
