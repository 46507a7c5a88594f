//! Weighted averaging (WA) and weighted geometric (WG) aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ivff::{Ivffn, ScoreTriple};
use crate::weights::{check_influence, DecisionMatrix, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    /// `((1 − Π(1−ζ³)^w)^(1/3), Π η^w)`
    Wa,
    /// `(Π ζ^w, (1 − Π(1−η³)^w)^(1/3))`
    Wg,
}

impl Operator {
    pub fn apply(self, values: &[Ivffn], weights: &WeightVector) -> Result<Ivffn> {
        match self {
            Operator::Wa => ivffwa(values, weights),
            Operator::Wg => ivffwg(values, weights),
        }
    }

    pub(crate) fn apply_raw(self, values: &[Ivffn], weights: &[f64]) -> Ivffn {
        match self {
            Operator::Wa => weighted_average(values, weights),
            Operator::Wg => weighted_geometric(values, weights),
        }
    }
}

fn check_len(values: &[Ivffn], weights: &[f64]) -> Result<()> {
    if values.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: values.len(),
        });
    }
    Ok(())
}

pub fn ivffwa(values: &[Ivffn], weights: &WeightVector) -> Result<Ivffn> {
    check_len(values, weights.as_slice())?;
    Ok(weighted_average(values, weights.as_slice()))
}

pub fn ivffwg(values: &[Ivffn], weights: &WeightVector) -> Result<Ivffn> {
    check_len(values, weights.as_slice())?;
    Ok(weighted_geometric(values, weights.as_slice()))
}

/// WA form with arbitrary non-negative weights. Closure holds for any such
/// weights, not only those summing to one.
pub(crate) fn weighted_average(values: &[Ivffn], weights: &[f64]) -> Ivffn {
    // Σ w ln(1 − ζ³), so 1 − Π(1 − ζ³)^w = −expm1(·) keeps small grades exact
    let mut log_keep = [0.0f64; 2];
    let mut non = [1.0f64; 2];
    for (v, &w) in values.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let [zl, zu, nl, nu] = v.grades();
        log_keep[0] += w * (-(zl * zl * zl)).ln_1p();
        log_keep[1] += w * (-(zu * zu * zu)).ln_1p();
        non[0] *= nl.powf(w);
        non[1] *= nu.powf(w);
    }
    let root = |l: f64| (-l.exp_m1()).clamp(0.0, 1.0).cbrt();
    Ivffn::new(root(log_keep[0]), root(log_keep[1]), non[0], non[1])
        .expect("weighted average stays inside the IVFFN domain")
}

pub(crate) fn weighted_geometric(values: &[Ivffn], weights: &[f64]) -> Ivffn {
    let swapped: Vec<Ivffn> = values.iter().map(Ivffn::complement).collect();
    weighted_average(&swapped, weights).complement()
}

/// Cellwise aggregation of every decision maker's matrix.
pub fn collapse_dms(
    matrices: &[DecisionMatrix],
    influence: &[f64],
    op: Operator,
) -> Result<DecisionMatrix> {
    let first = matrices.first().ok_or(Error::EmptyProblem)?;
    if influence.len() != matrices.len() {
        return Err(Error::DimensionMismatch {
            expected: matrices.len(),
            found: influence.len(),
        });
    }
    check_influence(influence)?;
    let (m, n) = (first.num_alternatives(), first.num_criteria());
    if let Some(bad) = matrices
        .iter()
        .find(|x| x.num_alternatives() != m || x.num_criteria() != n)
    {
        return Err(Error::ShapeMismatch(format!(
            "matrix of {} is {}x{}, expected {m}x{n}",
            bad.dm(),
            bad.num_alternatives(),
            bad.num_criteria()
        )));
    }
    let mut cells = Vec::with_capacity(m);
    let mut stack = Vec::with_capacity(matrices.len());
    for i in 0..m {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            stack.clear();
            stack.extend(matrices.iter().map(|x| x.cell(i, j)));
            row.push(op.apply_raw(&stack, influence));
        }
        cells.push(row);
    }
    DecisionMatrix::new("collective", cells)
}

/// An alternative's overall preference value with its scores.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preference {
    pub value: Ivffn,
    pub scores: ScoreTriple,
}

impl Preference {
    pub fn new(value: Ivffn) -> Self {
        Preference {
            value,
            scores: value.score_triple(),
        }
    }
}

/// Aggregates each alternative's row of `collective` with `weights`.
pub fn preference_values(
    collective: &DecisionMatrix,
    weights: &WeightVector,
    op: Operator,
) -> Result<Vec<Preference>> {
    if weights.len() != collective.num_criteria() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} criteria",
            weights.len(),
            collective.num_criteria()
        )));
    }
    collective
        .rows()
        .iter()
        .map(|row| op.apply(row, weights).map(Preference::new))
        .collect()
}
