//! Pairwise energy data model and exact evaluation.
//!
//! An energy over `n` variables with `l` labels is the tuple `(n, l, D, W, V)`:
//! `D` is the dense `n x l` table of unary costs, `W` a sparse matrix of edge
//! weights and `V` the dense `l x l` table of label-interaction costs. The
//! energy of a labeling `L` is
//!
//! ```text
//! E(L) = sum_i D[i, L[i]] + sum_{(i,j) in W} w_ij * V[L[i], L[j]]
//! ```
//!
//! and the equivalent quadratic form on an assignment matrix `U` (binary rows
//! selecting one label per variable, or fractional after interpolation) is
//! `E(U) = Tr(D U^T) + sum_{(i,j) in W} w_ij * (U V U^T)_ij`.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Dense real matrix used for unary costs, label interactions and assignments.
pub type Mat = Array2<f64>;

/// Assignment matrix: one row per variable, one column per label.
///
/// Rows sum to 1; a labeling-derived assignment is binary with a single 1 per
/// row, interpolated assignments are fractional.
pub type Assignment = Mat;

/// A single stored edge weight `w_ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(i: usize, j: usize, weight: f64) -> Self {
        Edge { i, j, weight }
    }
}

/// Sparse edge-weight matrix `W`.
///
/// Each undirected edge is stored exactly once. In the canonical form
/// (`oriented == false`) entries satisfy `i <= j`; diagonal entries are legal
/// and arise from coarsening. Coarsening an energy with an asymmetric `V`
/// must preserve edge orientation, so such energies store both `(i, j)` and
/// `(j, i)` entries and set `oriented`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeWeights {
    pub oriented: bool,
    pub entries: Vec<Edge>,
}

impl EdgeWeights {
    pub fn empty() -> Self {
        EdgeWeights::default()
    }

    pub fn from_entries(oriented: bool, entries: Vec<Edge>) -> Self {
        EdgeWeights { oriented, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.entries.iter()
    }
}

/// A pairwise discrete energy `(n, l, D, W, V)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Energy {
    /// Unary costs `D`, one row per variable, one column per label.
    pub unary: Mat,
    /// Sparse edge weights `W`.
    pub weights: EdgeWeights,
    /// Label-interaction costs `V`, `l x l`.
    pub interaction: Mat,
}

impl Energy {
    pub fn new(unary: Mat, weights: EdgeWeights, interaction: Mat) -> Self {
        Energy {
            unary,
            weights,
            interaction,
        }
    }

    /// Number of variables `n`.
    pub fn num_vars(&self) -> usize {
        self.unary.nrows()
    }

    /// Number of labels `l`.
    pub fn num_labels(&self) -> usize {
        self.unary.ncols()
    }

    /// Checks every structural invariant and returns one message per
    /// violation. An empty list means the energy is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let n = self.num_vars();
        let l = self.num_labels();

        if n == 0 {
            violations.push("D: no variables (zero rows)".to_string());
        }
        if l == 0 {
            violations.push("D: no labels (zero columns)".to_string());
        }
        if self.interaction.nrows() != l || self.interaction.ncols() != l {
            violations.push(format!(
                "V: expected {l}x{l}, got {}x{}",
                self.interaction.nrows(),
                self.interaction.ncols()
            ));
        }
        for ((i, a), &v) in self.unary.indexed_iter() {
            if !v.is_finite() {
                violations.push(format!("D: non-finite value at ({i}, {a})"));
            }
        }
        for ((a, b), &v) in self.interaction.indexed_iter() {
            if !v.is_finite() {
                violations.push(format!("V: non-finite value at ({a}, {b})"));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for edge in self.weights.iter() {
            if edge.i >= n || edge.j >= n {
                violations.push(format!(
                    "W: entry ({}, {}) out of range for {n} variables",
                    edge.i, edge.j
                ));
                continue;
            }
            if !self.weights.oriented && edge.i > edge.j {
                violations.push(format!(
                    "W: entry ({}, {}) violates lower-triangular storage",
                    edge.i, edge.j
                ));
            }
            if !edge.weight.is_finite() {
                violations.push(format!(
                    "W: non-finite weight at ({}, {})",
                    edge.i, edge.j
                ));
            }
            if !seen.insert((edge.i, edge.j)) {
                violations.push(format!("W: duplicate edge ({}, {})", edge.i, edge.j));
            }
        }
        violations
    }

    /// Exact energy of a labeling.
    ///
    /// Each stored edge contributes exactly once, in stored orientation;
    /// diagonal entries contribute `w_ii * V[l_i, l_i]`.
    pub fn evaluate(&self, labeling: &Labeling) -> Result<f64> {
        self.check_labeling(labeling)?;
        self.check_interaction_shape()?;
        let labels = &labeling.0;
        let mut total = 0.0;
        for (i, &li) in labels.iter().enumerate() {
            total += self.unary[[i, li]];
        }
        for edge in self.weights.iter() {
            total += edge.weight * self.interaction[[labels[edge.i], labels[edge.j]]];
        }
        Ok(total)
    }

    /// Energy of an assignment matrix (fractional rows allowed).
    ///
    /// Computes `Tr(D U^T) + sum_{(i,j)} w_ij * (U V U^T)_ij` over the stored
    /// edges; for a binary assignment this equals [`Energy::evaluate`] on the
    /// corresponding labeling.
    pub fn evaluate_assignment(&self, u: &Assignment) -> Result<f64> {
        let n = self.num_vars();
        let l = self.num_labels();
        if u.nrows() != n || u.ncols() != l {
            return Err(Error::DimensionMismatch(format!(
                "assignment is {}x{}, energy expects {n}x{l}",
                u.nrows(),
                u.ncols()
            )));
        }
        self.check_interaction_shape()?;
        let mut total = 0.0;
        for ((i, a), &v) in self.unary.indexed_iter() {
            total += v * u[[i, a]];
        }
        if !self.weights.is_empty() {
            // (U V U^T)_ij = row_i(U V) . row_j(U)
            let uv = u.dot(&self.interaction);
            for edge in self.weights.iter() {
                let s = uv.row(edge.i).dot(&u.row(edge.j));
                total += edge.weight * s;
            }
        }
        Ok(total)
    }

    fn check_labeling(&self, labeling: &Labeling) -> Result<()> {
        if labeling.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "labeling has {} entries, energy has {} variables",
                labeling.len(),
                self.num_vars()
            )));
        }
        let l = self.num_labels();
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

    fn check_interaction_shape(&self) -> Result<()> {
        let l = self.num_labels();
        if self.interaction.nrows() != l || self.interaction.ncols() != l {
            return Err(Error::DimensionMismatch(format!(
                "interaction table is {}x{}, expected {l}x{l}",
                self.interaction.nrows(),
                self.interaction.ncols()
            )));
        }
        Ok(())
    }
}

/// A discrete labeling: one 0-based label per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling(pub Vec<usize>);

impl Labeling {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Expands a labeling into its binary assignment matrix.
pub fn labeling_to_assignment(labeling: &Labeling, num_labels: usize) -> Result<Assignment> {
    let mut u = Array2::zeros((labeling.len(), num_labels));
    for (i, &li) in labeling.0.iter().enumerate() {
        if li >= num_labels {
            return Err(Error::LabelOutOfRange {
                variable: i,
                label: li,
                label_count: num_labels,
            });
        }
        u[[i, li]] = 1.0;
    }
    Ok(u)
}

/// Rounds an assignment matrix to a labeling: per-row argmax, ties broken
/// toward the smallest label index.
pub fn assignment_to_labeling(u: &Assignment) -> Labeling {
    let labels = u
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            let mut best_value = row[0];
            for (a, &v) in row.iter().enumerate().skip(1) {
                if v > best_value {
                    best = a;
                    best_value = v;
                }
            }
            best
        })
        .collect();
    Labeling(labels)
}
