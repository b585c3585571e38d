//! Coarsening the label set instead of the variables: merge five labels into
//! two groups through a caller-supplied row-stochastic map and verify the
//! energies agree on expanded assignments.

use energy_pyramid::coarsen::coarsen_labels;
use energy_pyramid::energy::{labeling_to_assignment, Labeling};
use energy_pyramid::synth::{generate_synthetic, SyntheticParams};
use ndarray::array;

fn main() -> energy_pyramid::Result<()> {
    let energy = generate_synthetic(&SyntheticParams {
        rows: 4,
        cols: 4,
        labels: 5,
        lambda: 10.0,
        seed: 11,
    });

    // Labels {0,1,2} -> coarse 0, labels {3,4} -> coarse 1.
    let label_map = array![
        [1.0, 0.0],
        [1.0, 0.0],
        [1.0, 0.0],
        [0.0, 1.0],
        [0.0, 1.0],
    ];
    let coarse = coarsen_labels(&energy, &label_map)?;
    println!(
        "labels {} -> {}, variables unchanged at {}",
        energy.num_labels(),
        coarse.num_labels(),
        coarse.num_vars()
    );
    println!("coarse interaction table:\n{:.4}", coarse.interaction);

    // A coarse labeling expands through the map: U = U_coarse * P_hat^T.
    let coarse_labeling = Labeling((0..coarse.num_vars()).map(|i| i % 2).collect());
    let u_coarse = labeling_to_assignment(&coarse_labeling, 2)?;
    let expanded = u_coarse.dot(&label_map.t());
    let coarse_value = coarse.evaluate_assignment(&u_coarse)?;
    let fine_value = energy.evaluate_assignment(&expanded)?;
    println!("E_coarse = {coarse_value:.10}, E_fine(expanded) = {fine_value:.10}");
    assert!((coarse_value - fine_value).abs() <= 1e-9 * (1.0 + fine_value.abs()));
    Ok(())
}
