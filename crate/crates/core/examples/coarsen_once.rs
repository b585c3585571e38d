//! One coarsening step in slow motion: sample, estimate agreements, select
//! coarse variables, build the interpolation, take the Galerkin product, and
//! verify the coarse energy reproduces the fine energy on an interpolated
//! assignment.

use energy_pyramid::coarsen::{
    build_interpolation, coarsen_energy, estimate_agreements, select_coarse_vars, CoarseningParams,
};
use energy_pyramid::energy::{labeling_to_assignment, Labeling};
use energy_pyramid::icm::sample_low_energy;
use energy_pyramid::synth::{generate_synthetic, SyntheticParams};

fn main() -> energy_pyramid::Result<()> {
    let fine = generate_synthetic(&SyntheticParams {
        rows: 6,
        cols: 6,
        labels: 3,
        lambda: 10.0,
        seed: 3,
    });
    let params = CoarseningParams::default();

    let samples = sample_low_energy(&fine, &params.icm)?;
    let agreements = estimate_agreements(&fine, &samples, &params)?;
    println!(
        "agreements on {} edges, sigma = {}",
        agreements.entries.len(),
        agreements.sigma
    );

    let coarse_vars = select_coarse_vars(&fine, &agreements, params.beta);
    println!(
        "selected {} of {} variables: {:?}",
        coarse_vars.len(),
        fine.num_vars(),
        coarse_vars
    );

    let interp = build_interpolation(&fine, &agreements, &coarse_vars, params.delta)?;
    let widths: Vec<usize> = interp.rows.iter().map(|r| r.len()).collect();
    println!(
        "interpolation {}x{}, row widths min {} max {}",
        interp.num_fine(),
        interp.num_coarse(),
        widths.iter().min().unwrap(),
        widths.iter().max().unwrap()
    );

    let coarse = coarsen_energy(&fine, &interp)?;
    println!(
        "coarse energy: {} variables, {} stored edges",
        coarse.num_vars(),
        coarse.weights.len()
    );

    // Exactness check: a coarse labeling and its fine interpolation have the
    // same energy under the respective energies.
    let coarse_labeling = Labeling((0..coarse.num_vars()).map(|i| i % 3).collect());
    let u_coarse = labeling_to_assignment(&coarse_labeling, 3)?;
    let u_fine = interp.interpolate(&u_coarse)?;
    let coarse_value = coarse.evaluate_assignment(&u_coarse)?;
    let fine_value = fine.evaluate_assignment(&u_fine)?;
    println!("E_coarse = {coarse_value:.10}, E_fine(interpolated) = {fine_value:.10}");
    assert!((coarse_value - fine_value).abs() <= 1e-9 * (1.0 + fine_value.abs()));
    Ok(())
}
