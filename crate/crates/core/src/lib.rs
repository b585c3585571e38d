//! Multiscale optimization of pairwise discrete energies.
//!
//! Energies of the form `(n, l, D, W, V)` -- unary costs plus weighted
//! label-interaction costs over a sparse graph -- are coarsened algebraically
//! into an energy pyramid using an interpolation operator built from the
//! agreement statistics of low-energy ICM samples, then optimized coarse to
//! fine with ICM refinement at every level. Contrast-enhancing instances
//! (negative edge weights that reward unequal neighboring labels) are the
//! target workload.
//!
//! The library is the primary interface; each major capability has a
//! runnable example:
//!
//! ```text
//! cargo run --example evaluate       # energy model and both evaluation forms
//! cargo run --example icm_refine     # ICM sweeps, restarts, monotone traces
//! cargo run --example coarsen_once   # agreements -> selection -> P -> coarse energy
//! cargo run --example label_coarsen  # label-side coarsening algebra
//! cargo run --example pyramid_solve  # full coarse-to-fine solve
//! cargo run --example benchmark      # seeded method comparison with oracle
//! cargo run --example energy_files   # text formats and round trips
//! ```
//!
//! A thin `mse` binary exposes the same capabilities as subcommands
//! (`generate`, `solve`, `eval`, `bench`); see the README for the file
//! formats and report schemas.

pub mod bench;
pub mod cli;
pub mod coarsen;
pub mod energy;
pub mod error;
pub mod icm;
pub mod io;
pub mod pyramid;
pub mod synth;

pub use bench::{run_benchmark, BenchConfig, BenchReport, Method};
pub use coarsen::{
    build_interpolation, coarsen_energy, coarsen_labels, estimate_agreements, select_coarse_vars,
    AgreementMap, CoarseningParams, Interpolation,
};
pub use energy::{
    assignment_to_labeling, labeling_to_assignment, Assignment, Edge, EdgeWeights, Energy,
    Labeling,
};
pub use error::{Error, Result};
pub use icm::{icm_optimize, icm_sweep, sample_low_energy, IcmParams, SampleSet};
pub use pyramid::{
    build_pyramid, solve_coarsest, solve_multiscale, Pyramid, PyramidParams, SolveReport,
    Termination,
};
pub use synth::{brute_force_min, generate_synthetic, SyntheticParams};
