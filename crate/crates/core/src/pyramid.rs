//! Multiscale pyramid construction and the coarse-to-fine solve.
//!
//! Construction works fine-to-coarse: sample low-energy labelings, estimate
//! agreements, select coarse variables, build the interpolation and take the
//! Galerkin product, repeating until the coarsest level is small enough (or
//! coarsening stalls). The solve then works coarse-to-fine: the coarsest
//! level is solved exactly when its state space is small, each solution is
//! interpolated one level down, rounded, and refined with ICM.

use crate::coarsen::{
    build_interpolation, coarsen_energy, estimate_agreements, select_coarse_vars,
    CoarseningParams, Interpolation,
};
use crate::energy::{assignment_to_labeling, labeling_to_assignment, Energy, Labeling};
use crate::error::Result;
use crate::icm::{icm_optimize, sample_low_energy, IcmParams};
use crate::synth::{brute_force_min_with_limit, state_count};

const COARSEST_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Pyramid construction and refinement budgets.
#[derive(Clone, Debug)]
pub struct PyramidParams {
    /// Stop coarsening once a level has at most this many variables.
    pub coarsest_size: usize,
    /// Maximum number of coarsening steps.
    pub max_levels: usize,
    /// Stop when a step keeps more than this fraction of its variables.
    pub stall_ratio: f64,
    pub coarsen: CoarseningParams,
    /// ICM budget for per-level refinement and the coarsest-level fallback.
    pub refine: IcmParams,
    /// Solve the coarsest level exhaustively when `l^n` is at most this.
    pub exhaustive_limit: u64,
    pub seed: u64,
}

impl Default for PyramidParams {
    fn default() -> Self {
        PyramidParams {
            coarsest_size: 10,
            max_levels: 20,
            stall_ratio: 0.9,
            coarsen: CoarseningParams::default(),
            refine: IcmParams::default(),
            exhaustive_limit: 1 << 20,
            seed: 0,
        }
    }
}

/// Why pyramid construction stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    ReachedCoarsestSize,
    Stalled,
    MaxLevels,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ReachedCoarsestSize => "reached_coarsest_size",
            Termination::Stalled => "stalled",
            Termination::MaxLevels => "max_levels",
        }
    }
}

/// The energy pyramid: level 0 is the input energy, `interps[s]` maps
/// level `s + 1` assignments down to level `s`.
#[derive(Clone, Debug)]
pub struct Pyramid {
    pub levels: Vec<Energy>,
    pub interps: Vec<Interpolation>,
    pub termination: Termination,
    /// Total ICM sweeps spent sampling during construction.
    pub sampling_sweeps: usize,
}

/// Per-level record of a multiscale solve, coarsest level first.
#[derive(Clone, Copy, Debug)]
pub struct LevelStats {
    pub num_vars: usize,
    pub energy: f64,
    pub sweeps: usize,
}

/// Outcome of a multiscale solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub final_labeling: Labeling,
    pub final_energy: f64,
    pub per_level: Vec<LevelStats>,
    pub termination: Termination,
    /// Every ICM sweep spent anywhere in the solve (sampling, coarsest
    /// fallback, refinement); the budget a single-scale comparison gets.
    pub total_sweeps: usize,
}

/// Builds the energy pyramid fine-to-coarse.
///
/// Level-`s` sampling is seeded with `params.seed ^ s`, so identical seeds
/// give identical pyramids.
pub fn build_pyramid(energy: &Energy, params: &PyramidParams) -> Result<Pyramid> {
    let mut levels = vec![energy.clone()];
    let mut interps = Vec::new();
    let mut sampling_sweeps = 0;
    let termination = loop {
        let current = levels.last().unwrap();
        let n = current.num_vars();
        if n <= params.coarsest_size {
            break Termination::ReachedCoarsestSize;
        }
        if interps.len() >= params.max_levels {
            break Termination::MaxLevels;
        }
        let level_seed = params.seed ^ (interps.len() as u64);
        let samples = sample_low_energy(
            current,
            &IcmParams {
                seed: level_seed,
                ..params.coarsen.icm
            },
        )?;
        sampling_sweeps += samples.total_sweeps();
        let agreements = estimate_agreements(current, &samples, &params.coarsen)?;
        let coarse = select_coarse_vars(current, &agreements, params.coarsen.beta);
        if coarse.len() as f64 > params.stall_ratio * n as f64 {
            break Termination::Stalled;
        }
        let interp = build_interpolation(current, &agreements, &coarse, params.coarsen.delta)?;
        let coarse_energy = coarsen_energy(current, &interp)?;
        interps.push(interp);
        levels.push(coarse_energy);
    };
    Ok(Pyramid {
        levels,
        interps,
        termination,
        sampling_sweeps,
    })
}

/// Solves one level directly: exhaustively when the state space fits within
/// `params.exhaustive_limit`, otherwise by seeded ICM restarts.
pub fn solve_coarsest(energy: &Energy, params: &PyramidParams) -> Result<Labeling> {
    solve_coarsest_with_stats(energy, params).map(|(labeling, _, _)| labeling)
}

fn solve_coarsest_with_stats(
    energy: &Energy,
    params: &PyramidParams,
) -> Result<(Labeling, f64, usize)> {
    let exhaustive = matches!(state_count(energy), Some(s) if s <= params.exhaustive_limit as u128);
    if exhaustive {
        let (labeling, value) = brute_force_min_with_limit(energy, params.exhaustive_limit)?;
        return Ok((labeling, value, 0));
    }
    let samples = sample_low_energy(
        energy,
        &IcmParams {
            restarts: params.refine.restarts,
            sweeps_per_sample: params.refine.max_sweeps,
            seed: params.seed ^ COARSEST_SEED_SALT,
            ..params.refine
        },
    )?;
    let sweeps = samples.total_sweeps();
    let (best, value) = samples.best().expect("at least one restart");
    Ok((best.clone(), value, sweeps))
}

/// Full coarse-to-fine solve: build the pyramid, solve the coarsest level,
/// then repeatedly interpolate, round, and refine with ICM down to level 0.
pub fn solve_multiscale(energy: &Energy, params: &PyramidParams) -> Result<SolveReport> {
    let pyramid = build_pyramid(energy, params)?;
    let coarsest = pyramid.levels.len() - 1;
    let (mut labeling, coarsest_energy, coarsest_sweeps) =
        solve_coarsest_with_stats(&pyramid.levels[coarsest], params)?;
    let mut total_sweeps = pyramid.sampling_sweeps + coarsest_sweeps;
    let mut per_level = vec![LevelStats {
        num_vars: pyramid.levels[coarsest].num_vars(),
        energy: coarsest_energy,
        sweeps: coarsest_sweeps,
    }];

    for level in (0..coarsest).rev() {
        let num_labels = pyramid.levels[level].num_labels();
        let coarse_assignment = labeling_to_assignment(&labeling, num_labels)?;
        let interpolated = pyramid.interps[level].interpolate(&coarse_assignment)?;
        let rounded = assignment_to_labeling(&interpolated);
        let (refined, trace) = icm_optimize(&pyramid.levels[level], &rounded, &params.refine)?;
        let energy_value = pyramid.levels[level].evaluate(&refined)?;
        total_sweeps += trace.len();
        per_level.push(LevelStats {
            num_vars: pyramid.levels[level].num_vars(),
            energy: energy_value,
            sweeps: trace.len(),
        });
        labeling = refined;
    }

    let final_energy = pyramid.levels[0].evaluate(&labeling)?;
    Ok(SolveReport {
        final_labeling: labeling,
        final_energy,
        per_level,
        termination: pyramid.termination,
        total_sweeps,
    })
}
