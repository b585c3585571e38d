//! Iterated Conditional Modes and zero-temperature sampling.
//!
//! ICM sweeps variables in ascending index order and moves each to the label
//! with the lowest conditional cost given its neighbors' current labels
//! (Gauss-Seidel style: later variables see earlier updates within the same
//! sweep). Restarting from random labelings yields the low-energy samples
//! used by agreement estimation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{Energy, Labeling};
use crate::error::{Error, Result};

/// ICM sweep and sampling budgets.
#[derive(Clone, Copy, Debug)]
pub struct IcmParams {
    /// Sweep cap for a single optimization run.
    pub max_sweeps: usize,
    /// Number of random restarts when sampling.
    pub restarts: usize,
    /// Sweep cap per sampling restart.
    pub sweeps_per_sample: usize,
    pub seed: u64,
}

impl Default for IcmParams {
    fn default() -> Self {
        IcmParams {
            max_sweeps: 10,
            restarts: 10,
            sweeps_per_sample: 10,
            seed: 0,
        }
    }
}

/// Low-energy labelings collected from ICM restarts.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub samples: Vec<Labeling>,
    pub energies: Vec<f64>,
    /// Sweeps actually performed per restart (bookkeeping for budget-matched
    /// comparisons).
    pub sweeps: Vec<usize>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_sweeps(&self) -> usize {
        self.sweeps.iter().sum()
    }

    /// Lowest-energy sample; ties go to the earlier restart.
    pub fn best(&self) -> Option<(&Labeling, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &e) in self.energies.iter().enumerate() {
            if best.is_none_or(|(_, be)| e < be) {
                best = Some((k, e));
            }
        }
        best.map(|(k, e)| (&self.samples[k], e))
    }
}

/// One incident edge as seen from a variable.
struct Incident {
    other: usize,
    weight: f64,
    /// True when the edge is stored with this variable first, i.e. the
    /// interaction is read as `V[own_label, other_label]`.
    stored_first: bool,
}

/// Per-variable view of the stored edges.
struct Adjacency {
    incident: Vec<Vec<Incident>>,
    /// Accumulated diagonal weight `w_ii` per variable.
    self_weight: Vec<f64>,
}

impl Adjacency {
    fn build(energy: &Energy) -> Adjacency {
        let n = energy.num_vars();
        let mut incident: Vec<Vec<Incident>> = (0..n).map(|_| Vec::new()).collect();
        let mut self_weight = vec![0.0; n];
        for edge in energy.weights.iter() {
            if edge.i == edge.j {
                self_weight[edge.i] += edge.weight;
            } else {
                incident[edge.i].push(Incident {
                    other: edge.j,
                    weight: edge.weight,
                    stored_first: true,
                });
                incident[edge.j].push(Incident {
                    other: edge.i,
                    weight: edge.weight,
                    stored_first: false,
                });
            }
        }
        Adjacency {
            incident,
            self_weight,
        }
    }
}

/// Conditional cost of assigning `label` to variable `var` given the other
/// variables' current labels.
fn local_cost(energy: &Energy, adj: &Adjacency, labels: &[usize], var: usize, label: usize) -> f64 {
    let v = &energy.interaction;
    let mut cost = energy.unary[[var, label]] + adj.self_weight[var] * v[[label, label]];
    for inc in &adj.incident[var] {
        let other = labels[inc.other];
        cost += inc.weight
            * if inc.stored_first {
                v[[label, other]]
            } else {
                v[[other, label]]
            };
    }
    cost
}

/// One in-place sweep; returns whether any label changed.
fn sweep_in_place(energy: &Energy, adj: &Adjacency, labels: &mut [usize]) -> bool {
    let l = energy.num_labels();
    let mut changed = false;
    for var in 0..labels.len() {
        let mut best = 0;
        let mut best_cost = local_cost(energy, adj, labels, var, 0);
        for label in 1..l {
            let cost = local_cost(energy, adj, labels, var, label);
            if cost < best_cost {
                best = label;
                best_cost = cost;
            }
        }
        if best != labels[var] {
            labels[var] = best;
            changed = true;
        }
    }
    changed
}

fn check_input(energy: &Energy, labeling: &Labeling) -> Result<()> {
    if labeling.len() != energy.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "labeling has {} entries, energy has {} variables",
            labeling.len(),
            energy.num_vars()
        )));
    }
    let l = energy.num_labels();
    for (i, &li) in labeling.0.iter().enumerate() {
        if li >= l {
            return Err(Error::LabelOutOfRange {
                variable: i,
                label: li,
                label_count: l,
            });
        }
    }
    Ok(())
}

/// A single ICM sweep over all variables in ascending index order.
///
/// Ties in the conditional cost go to the smallest label, so a variable only
/// moves to an equal-cost label when that label has a smaller index.
pub fn icm_sweep(energy: &Energy, labeling: &Labeling) -> Result<(Labeling, bool)> {
    check_input(energy, labeling)?;
    let adj = Adjacency::build(energy);
    let mut labels = labeling.0.clone();
    let changed = sweep_in_place(energy, &adj, &mut labels);
    Ok((Labeling(labels), changed))
}

/// Sweeps until a fixed point or `params.max_sweeps`, whichever comes first.
///
/// The returned trace holds the energy after each sweep and is non-increasing.
pub fn icm_optimize(
    energy: &Energy,
    init: &Labeling,
    params: &IcmParams,
) -> Result<(Labeling, Vec<f64>)> {
    check_input(energy, init)?;
    let adj = Adjacency::build(energy);
    let mut labels = init.0.clone();
    let mut trace = Vec::new();
    for _ in 0..params.max_sweeps.max(1) {
        let changed = sweep_in_place(energy, &adj, &mut labels);
        trace.push(energy.evaluate(&Labeling(labels.clone()))?);
        if !changed {
            break;
        }
    }
    Ok((Labeling(labels), trace))
}

/// Runs `params.restarts` independent ICM runs of `params.sweeps_per_sample`
/// sweeps each, every run starting from a uniformly random labeling drawn
/// from the seeded generator. Deterministic given the seed.
pub fn sample_low_energy(energy: &Energy, params: &IcmParams) -> Result<SampleSet> {
    let n = energy.num_vars();
    let l = energy.num_labels();
    let adj = Adjacency::build(energy);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut samples = Vec::with_capacity(params.restarts);
    let mut energies = Vec::with_capacity(params.restarts);
    let mut sweeps = Vec::with_capacity(params.restarts);
    for _ in 0..params.restarts.max(1) {
        let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..l)).collect();
        let mut used = 0;
        for _ in 0..params.sweeps_per_sample.max(1) {
            let changed = sweep_in_place(energy, &adj, &mut labels);
            used += 1;
            if !changed {
                break;
            }
        }
        let labeling = Labeling(labels);
        let e = energy.evaluate(&labeling)?;
        samples.push(labeling);
        energies.push(e);
        sweeps.push(used);
    }
    Ok(SampleSet {
        samples,
        energies,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{Edge, EdgeWeights};
    use ndarray::array;
    use rand::Rng;

    /// n=2, l=2, D=0, one negative edge, Potts V: the two global minima are
    /// [0,1] and [1,0] with energy -1.
    fn contrast_pair() -> Energy {
        Energy::new(
            array![[0.0, 0.0], [0.0, 0.0]],
            EdgeWeights::from_entries(false, vec![Edge::new(0, 1, -1.0)]),
            array![[0.0, 1.0], [1.0, 0.0]],
        )
    }

    fn no_edge_energy() -> Energy {
        Energy::new(
            array![[3.0, 1.0, 2.0], [0.5, 2.0, -1.0], [4.0, 4.0, 0.0]],
            EdgeWeights::empty(),
            array![[0.0; 3], [0.0; 3], [0.0; 3]],
        )
    }

    #[test]
    fn separable_energy_solved_in_one_sweep() {
        let e = no_edge_energy();
        let (labeling, changed) = icm_sweep(&e, &Labeling(vec![0, 0, 0])).unwrap();
        assert_eq!(labeling.0, vec![1, 2, 2]);
        assert!(changed);
        let (again, changed) = icm_sweep(&e, &labeling).unwrap();
        assert_eq!(again, labeling);
        assert!(!changed);
    }

    #[test]
    fn contrast_sweep_hand_trace() {
        let e = contrast_pair();
        let (labeling, changed) = icm_sweep(&e, &Labeling(vec![0, 0])).unwrap();
        assert_eq!(labeling.0, vec![1, 0]);
        assert!(changed);
        assert_eq!(e.evaluate(&labeling).unwrap(), -1.0);
    }

    #[test]
    fn fixed_point_is_reported_unchanged() {
        let e = contrast_pair();
        let (labeling, changed) = icm_sweep(&e, &Labeling(vec![1, 0])).unwrap();
        assert_eq!(labeling.0, vec![1, 0]);
        assert!(!changed);
    }

    #[test]
    fn optimize_trace_from_fixed_point_has_length_one() {
        let e = contrast_pair();
        let (labeling, trace) =
            icm_optimize(&e, &Labeling(vec![0, 1]), &IcmParams::default()).unwrap();
        assert_eq!(labeling.0, vec![0, 1]);
        assert_eq!(trace, vec![-1.0]);
    }

    #[test]
    fn optimize_contrast_pair_reaches_minimum() {
        let e = contrast_pair();
        let (labeling, trace) =
            icm_optimize(&e, &Labeling(vec![0, 0]), &IcmParams::default()).unwrap();
        assert_eq!(*trace.last().unwrap(), -1.0);
        assert_eq!(e.evaluate(&labeling).unwrap(), -1.0);
    }

    #[test]
    fn optimize_separable_converges_within_two_sweeps() {
        let e = no_edge_energy();
        let (labeling, trace) =
            icm_optimize(&e, &Labeling(vec![0, 0, 0]), &IcmParams::default()).unwrap();
        assert!(trace.len() <= 2);
        assert_eq!(labeling.0, vec![1, 2, 2]);
    }

    #[test]
    fn optimize_respects_stored_orientation() {
        // Asymmetric V: cost of (l_0, l_1) read in stored order. With the
        // edge stored as (0,1), variable 1 should pick the cheap column.
        let e = Energy::new(
            array![[0.0, 10.0], [0.0, 0.0]],
            EdgeWeights::from_entries(false, vec![Edge::new(0, 1, 1.0)]),
            array![[5.0, 0.0], [9.0, 9.0]],
        );
        let (labeling, _) = icm_optimize(&e, &Labeling(vec![0, 0]), &IcmParams::default()).unwrap();
        assert_eq!(labeling.0, vec![0, 1]);
        assert_eq!(e.evaluate(&labeling).unwrap(), 0.0);
    }

    #[test]
    fn sampling_single_restart_on_separable_energy_is_optimal() {
        let e = no_edge_energy();
        let params = IcmParams {
            restarts: 1,
            seed: 7,
            ..IcmParams::default()
        };
        let set = sample_low_energy(&e, &params).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.samples[0].0, vec![1, 2, 2]);
        assert_eq!(set.energies[0], 1.0 - 1.0 + 0.0); // row minima of D
        assert_eq!(set.energies[0], e.evaluate(&set.samples[0]).unwrap());
    }

    #[test]
    fn sampling_is_deterministic_given_seed() {
        let e = contrast_pair();
        let params = IcmParams {
            seed: 42,
            ..IcmParams::default()
        };
        let a = sample_low_energy(&e, &params).unwrap();
        let b = sample_low_energy(&e, &params).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.energies, b.energies);
        assert_eq!(a.sweeps, b.sweeps);
    }

    #[test]
    fn contrast_pair_samples_all_reach_minimum() {
        // Both ICM basins end at energy -1, so every restart must too.
        let e = contrast_pair();
        let set = sample_low_energy(&e, &IcmParams::default()).unwrap();
        assert_eq!(set.len(), 10);
        assert!(set.energies.iter().all(|&v| v == -1.0));
    }

    #[test]
    fn sweep_rejects_bad_labelings() {
        let e = contrast_pair();
        assert!(icm_sweep(&e, &Labeling(vec![0])).is_err());
        assert!(icm_sweep(&e, &Labeling(vec![0, 9])).is_err());
    }

    #[test]
    fn sweeps_never_increase_energy_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..8);
            let l = rng.random_range(2..4);
            let unary =
                ndarray::Array2::from_shape_fn((n, l), |_| rng.random_range(-5.0..5.0f64));
            let interaction =
                ndarray::Array2::from_shape_fn((l, l), |_| rng.random_range(-2.0..2.0f64));
            let mut entries = Vec::new();
            for i in 0..n {
                for j in i..n {
                    if rng.random_bool(0.4) {
                        entries.push(Edge::new(i, j, rng.random_range(-3.0..3.0)));
                    }
                }
            }
            let e = Energy::new(unary, EdgeWeights::from_entries(false, entries), interaction);
            let init = Labeling((0..n).map(|_| rng.random_range(0..l)).collect());
            let before = e.evaluate(&init).unwrap();
            let (_, trace) = icm_optimize(&e, &init, &IcmParams::default()).unwrap();
            let mut prev = before;
            for &v in &trace {
                assert!(v <= prev, "trace increased: {v} > {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn small_separable_instances_reach_brute_force_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(1..4);
            let l = rng.random_range(1..4);
            let unary =
                ndarray::Array2::from_shape_fn((n, l), |_| rng.random_range(-5.0..5.0f64));
            let e = Energy::new(
                unary,
                EdgeWeights::empty(),
                ndarray::Array2::zeros((l, l)),
            );
            // Separable optimum: per-row argmin.
            let expected: f64 = (0..n)
                .map(|i| {
                    e.unary
                        .row(i)
                        .iter()
                        .cloned()
                        .fold(f64::INFINITY, f64::min)
                })
                .sum();
            let init = Labeling((0..n).map(|_| rng.random_range(0..l)).collect());
            let (labeling, _) = icm_optimize(&e, &init, &IcmParams::default()).unwrap();
            let got = e.evaluate(&labeling).unwrap();
            assert!((got - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }
}
