//! The text file formats: write an energy and a labeling, read them back,
//! and show the exact round trip.

use energy_pyramid::energy::Labeling;
use energy_pyramid::io::{
    read_energy_file, read_labeling_file, write_energy_file, write_labeling_file,
};
use energy_pyramid::synth::{generate_synthetic, SyntheticParams};

fn main() -> energy_pyramid::Result<()> {
    let dir = std::env::temp_dir();
    let energy_path = dir.join("example_energy.mse");
    let label_path = dir.join("example_labels.txt");

    let energy = generate_synthetic(&SyntheticParams {
        rows: 2,
        cols: 3,
        labels: 3,
        lambda: 10.0,
        seed: 9,
    });
    write_energy_file(&energy, &energy_path)?;
    let back = read_energy_file(&energy_path)?;
    assert_eq!(back, energy);
    println!("energy round trip exact: {}", energy_path.display());

    let text = std::fs::read_to_string(&energy_path)?;
    println!("--- first lines of the file ---");
    for line in text.lines().take(4) {
        println!("{line}");
    }
    println!("--- ({} lines total) ---", text.lines().count());

    let labeling = Labeling(vec![0, 1, 2, 2, 1, 0]);
    write_labeling_file(&labeling, &label_path)?;
    let back = read_labeling_file(&label_path, energy.num_vars(), energy.num_labels())?;
    assert_eq!(back, labeling);
    println!(
        "labeling round trip exact, energy of {:?} is {}",
        back.0,
        energy.evaluate(&back)?
    );
    Ok(())
}
