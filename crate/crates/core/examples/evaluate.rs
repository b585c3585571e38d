//! The energy data model: build a tiny two-variable energy and evaluate it
//! in both the label-vector form and the assignment-matrix (trace) form.

use energy_pyramid::energy::{
    assignment_to_labeling, labeling_to_assignment, Edge, EdgeWeights, Energy, Labeling,
};
use ndarray::array;

fn main() -> energy_pyramid::Result<()> {
    // Two variables, two labels, one edge of weight 2, Potts interactions.
    let energy = Energy::new(
        array![[1.0, 2.0], [3.0, 4.0]],
        EdgeWeights::from_entries(false, vec![Edge::new(0, 1, 2.0)]),
        array![[0.0, 1.0], [1.0, 0.0]],
    );
    assert!(energy.validate().is_empty());

    for labels in [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]] {
        let labeling = Labeling(labels);
        let direct = energy.evaluate(&labeling)?;
        let u = labeling_to_assignment(&labeling, energy.num_labels())?;
        let quadratic = energy.evaluate_assignment(&u)?;
        println!("labeling {:?}: E = {direct} (trace form {quadratic})", labeling.0);
        assert_eq!(direct, quadratic);
        assert_eq!(assignment_to_labeling(&u), labeling);
    }

    // Fractional assignments are allowed; rounding picks the per-row argmax.
    let soft = array![[0.5, 0.5], [0.2, 0.8]];
    println!(
        "soft assignment: E = {}, rounds to {:?}",
        energy.evaluate_assignment(&soft)?,
        assignment_to_labeling(&soft).0
    );
    Ok(())
}
