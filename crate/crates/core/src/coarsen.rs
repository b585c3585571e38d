//! Energy-aware interpolation and algebraic coarsening.
//!
//! Coarsening has two halves. The energy-aware half estimates, from
//! low-energy ICM samples, how strongly each pair of neighbors agrees (prefers
//! equal-cost joint labels), greedily picks a set of coarse representative
//! variables, and builds a sparse row-stochastic interpolation matrix `P`
//! that softly aggregates each fine variable into the coarse ones it agrees
//! with. The algebraic half is exact: given any row-stochastic `P`, the
//! coarse energy `(P^T D, P^T W P, V)` reproduces the fine energy on every
//! interpolated assignment, and the analogous column-side product coarsens
//! labels instead of variables.

use std::collections::BTreeMap;

use ndarray::Array2;

use crate::energy::{Assignment, Edge, EdgeWeights, Energy, Mat};
use crate::error::{Error, Result};
use crate::icm::{IcmParams, SampleSet};

/// Knobs for agreement estimation and interpolation construction.
#[derive(Clone, Debug)]
pub struct CoarseningParams {
    /// Agreement threshold for coarse-variable selection, in (0,1). Smaller
    /// values select fewer variables per level.
    pub beta: f64,
    /// Maximum nonzeros kept per interpolation row.
    pub delta: usize,
    /// Multiplier on the agreement scale `sigma = sigma_scale * max V`.
    pub sigma_scale: f64,
    /// Sampling budget used to estimate agreements.
    pub icm: IcmParams,
}

impl Default for CoarseningParams {
    fn default() -> Self {
        CoarseningParams {
            beta: 0.2,
            delta: 3,
            sigma_scale: 1.0,
            icm: IcmParams::default(),
        }
    }
}

/// Per-edge disagreement `d_ij` and agreement `c_ij = exp(-d_ij / sigma)`.
///
/// Entries exist exactly for the stored edges of the source energy, keyed in
/// stored orientation.
#[derive(Clone, Debug)]
pub struct AgreementMap {
    pub entries: BTreeMap<(usize, usize), (f64, f64)>,
    pub sigma: f64,
}

impl AgreementMap {
    /// Agreement for the pair `{i, j}` regardless of stored orientation.
    pub fn agreement(&self, i: usize, j: usize) -> Option<f64> {
        self.entries
            .get(&(i, j))
            .or_else(|| self.entries.get(&(j, i)))
            .map(|&(_, c)| c)
    }
}

/// Estimates per-edge agreements from a sample set.
///
/// For each stored edge, the disagreement is the mean interaction cost
/// observed across the samples, read in stored orientation; the agreement is
/// its negative exponential at scale `sigma = sigma_scale * max V` (falling
/// back to `sigma = 1` when `max V <= 0`).
pub fn estimate_agreements(
    energy: &Energy,
    samples: &SampleSet,
    params: &CoarseningParams,
) -> Result<AgreementMap> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for sample in &samples.samples {
        if sample.len() != energy.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "sample has {} entries, energy has {} variables",
                sample.len(),
                energy.num_vars()
            )));
        }
    }
    let max_v = energy
        .interaction
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let sigma = if max_v > 0.0 {
        params.sigma_scale * max_v
    } else {
        1.0
    };
    let count = samples.len() as f64;
    let mut entries = BTreeMap::new();
    for edge in energy.weights.iter() {
        let mut disagreement = 0.0;
        for sample in &samples.samples {
            disagreement += energy.interaction[[sample.0[edge.i], sample.0[edge.j]]];
        }
        disagreement /= count;
        let agreement = (-disagreement / sigma).exp();
        entries.insert((edge.i, edge.j), (disagreement, agreement));
    }
    Ok(AgreementMap { entries, sigma })
}

/// Neighbor lists with agreements, one entry per distinct neighbor pair;
/// parallel stored orientations accumulate.
fn agreement_adjacency(energy: &Energy, agreements: &AgreementMap) -> Vec<Vec<(usize, f64)>> {
    let n = energy.num_vars();
    let mut adj: Vec<BTreeMap<usize, f64>> = (0..n).map(|_| BTreeMap::new()).collect();
    for (&(i, j), &(_, c)) in &agreements.entries {
        if i == j {
            continue; // self-loops do not aggregate a variable with itself
        }
        *adj[i].entry(j).or_insert(0.0) += c;
        *adj[j].entry(i).or_insert(0.0) += c;
    }
    adj.into_iter()
        .map(|m| m.into_iter().collect())
        .collect()
}

/// Greedy coarse-variable selection.
///
/// Scans variables in ascending index order and adds `i` to the coarse set
/// when its agreement with the already-selected variables falls below `beta`
/// times its total agreement. Variables with no neighbors (or all-zero
/// agreements) are always promoted so every interpolation row stays well
/// defined. Coarse indices are assigned in selection order.
pub fn select_coarse_vars(energy: &Energy, agreements: &AgreementMap, beta: f64) -> Vec<usize> {
    let adj = agreement_adjacency(energy, agreements);
    let n = energy.num_vars();
    let mut selected = vec![false; n];
    let mut coarse = Vec::new();
    for i in 0..n {
        let total: f64 = adj[i].iter().map(|&(_, c)| c).sum();
        let take = if adj[i].is_empty() || total <= 0.0 {
            true
        } else {
            let with_selected: f64 = adj[i]
                .iter()
                .filter(|&&(j, _)| selected[j])
                .map(|&(_, c)| c)
                .sum();
            with_selected < beta * total
        };
        if take {
            selected[i] = true;
            coarse.push(i);
        }
    }
    coarse
}

/// Sparse row-stochastic interpolation from coarse to fine variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Interpolation {
    /// Row `i` holds the (coarse column, value) pairs of fine variable `i`,
    /// sorted by column.
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Coarse index of each selected fine variable.
    pub coarse_of: BTreeMap<usize, usize>,
    pub num_coarse: usize,
}

impl Interpolation {
    /// Wraps explicit rows, checking that each is nonnegative and sums to 1.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>, num_coarse: usize) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, v)| v).sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::NotRowStochastic { row: i, sum });
            }
            for &(col, v) in row {
                if col >= num_coarse || !v.is_finite() || v < 0.0 {
                    return Err(Error::DimensionMismatch(format!(
                        "interpolation row {i}: bad entry ({col}, {v})"
                    )));
                }
            }
        }
        Ok(Interpolation {
            rows,
            coarse_of: BTreeMap::new(),
            num_coarse,
        })
    }

    pub fn identity(n: usize) -> Self {
        Interpolation {
            rows: (0..n).map(|i| vec![(i, 1.0)]).collect(),
            coarse_of: (0..n).map(|i| (i, i)).collect(),
            num_coarse: n,
        }
    }

    pub fn num_fine(&self) -> usize {
        self.rows.len()
    }

    pub fn num_coarse(&self) -> usize {
        self.num_coarse
    }

    /// Maps a coarse assignment to a fine one: `U_fine = P U_coarse`.
    pub fn interpolate(&self, coarse: &Assignment) -> Result<Assignment> {
        if coarse.nrows() != self.num_coarse {
            return Err(Error::DimensionMismatch(format!(
                "coarse assignment has {} rows, interpolation expects {}",
                coarse.nrows(),
                self.num_coarse
            )));
        }
        let l = coarse.ncols();
        let mut fine = Array2::zeros((self.num_fine(), l));
        for (i, row) in self.rows.iter().enumerate() {
            for &(a, p) in row {
                for b in 0..l {
                    fine[[i, b]] += p * coarse[[a, b]];
                }
            }
        }
        Ok(fine)
    }
}

/// Builds the interpolation matrix for a coarse-variable selection.
///
/// A selected variable gets a unit row at its own coarse column; every other
/// variable gets its agreements with coarse neighbors, pruned to the `delta`
/// largest entries (ties keep the smaller coarse index) and normalized to
/// sum 1.
pub fn build_interpolation(
    energy: &Energy,
    agreements: &AgreementMap,
    coarse: &[usize],
    delta: usize,
) -> Result<Interpolation> {
    let n = energy.num_vars();
    let coarse_of: BTreeMap<usize, usize> =
        coarse.iter().enumerate().map(|(c, &i)| (i, c)).collect();
    let adj = agreement_adjacency(energy, agreements);
    let mut rows = Vec::with_capacity(n);
    for (i, neighbors) in adj.iter().enumerate() {
        if let Some(&c) = coarse_of.get(&i) {
            rows.push(vec![(c, 1.0)]);
            continue;
        }
        let mut entries: Vec<(usize, f64)> = neighbors
            .iter()
            .filter_map(|&(j, c)| {
                coarse_of
                    .get(&j)
                    .and_then(|&col| (c > 0.0).then_some((col, c)))
            })
            .collect();
        if entries.is_empty() {
            return Err(Error::NoCoarseNeighbor(i));
        }
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        entries.truncate(delta.max(1));
        entries.sort_by_key(|&(col, _)| col);
        let sum: f64 = entries.iter().map(|&(_, v)| v).sum();
        for entry in &mut entries {
            entry.1 /= sum;
        }
        rows.push(entries);
    }
    Ok(Interpolation {
        rows,
        coarse_of,
        num_coarse: coarse.len(),
    })
}

fn interaction_is_symmetric(v: &Mat) -> bool {
    let l = v.nrows();
    (0..l).all(|a| (a + 1..l).all(|b| v[[a, b]] == v[[b, a]]))
}

/// Galerkin coarsening of variables: `(P^T D, P^T W P, V)`.
///
/// The triple product is computed on the stored entries. When `V` is
/// symmetric the `(a, b)` and `(b, a)` contributions fold into the canonical
/// single-entry form; an asymmetric `V` makes orientation significant, so
/// both orientations are kept and the result is marked oriented. Either way
/// the coarse energy agrees exactly with the fine energy on interpolated
/// assignments.
pub fn coarsen_energy(fine: &Energy, interp: &Interpolation) -> Result<Energy> {
    let n = fine.num_vars();
    let l = fine.num_labels();
    if interp.num_fine() != n {
        return Err(Error::DimensionMismatch(format!(
            "interpolation has {} fine rows, energy has {n} variables",
            interp.num_fine()
        )));
    }
    let nc = interp.num_coarse();

    let mut unary = Array2::zeros((nc, l));
    for (i, row) in interp.rows.iter().enumerate() {
        for &(a, p) in row {
            for b in 0..l {
                unary[[a, b]] += p * fine.unary[[i, b]];
            }
        }
    }

    let mut product: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for edge in fine.weights.iter() {
        for &(a, pa) in &interp.rows[edge.i] {
            for &(b, pb) in &interp.rows[edge.j] {
                *product.entry((a, b)).or_insert(0.0) += pa * edge.weight * pb;
            }
        }
    }

    let symmetric = interaction_is_symmetric(&fine.interaction);
    let mut folded: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for ((a, b), w) in product {
        let key = if symmetric && a > b { (b, a) } else { (a, b) };
        *folded.entry(key).or_insert(0.0) += w;
    }
    let entries: Vec<Edge> = folded
        .into_iter()
        .filter(|&(_, w)| w != 0.0)
        .map(|((a, b), w)| Edge::new(a, b, w))
        .collect();

    Ok(Energy::new(
        unary,
        EdgeWeights::from_entries(!symmetric, entries),
        fine.interaction.clone(),
    ))
}

/// Galerkin coarsening of labels: `(D P_hat, W, P_hat^T V P_hat)`.
///
/// `label_interp` is a row-stochastic `l x l_coarse` matrix supplied by the
/// caller; coarse assignments expand through it as `U = U_coarse P_hat^T`.
pub fn coarsen_labels(energy: &Energy, label_interp: &Mat) -> Result<Energy> {
    let l = energy.num_labels();
    if label_interp.nrows() != l {
        return Err(Error::DimensionMismatch(format!(
            "label interpolation has {} rows, energy has {l} labels",
            label_interp.nrows()
        )));
    }
    if label_interp.ncols() == 0 {
        return Err(Error::DimensionMismatch(
            "label interpolation has no columns".to_string(),
        ));
    }
    for (row, sum) in label_interp
        .rows()
        .into_iter()
        .map(|r| r.sum())
        .enumerate()
    {
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotRowStochastic { row, sum });
        }
    }
    let unary = energy.unary.dot(label_interp);
    let interaction = label_interp.t().dot(&energy.interaction).dot(label_interp);
    Ok(Energy::new(unary, energy.weights.clone(), interaction))
}
