//! Complex proportional assessment (COPRAS) over IVFF judgments.
//!
//! Benefit columns fold into a maximizing index `a_i`, cost columns into a
//! minimizing index `b_i`, both with the weighted-averaging form and the
//! group weights restricted to each side (not renormalized). Then
//!
//! ```text
//! ξ_i = s(a_i) + Σ_k s(b_k) / (s(b_i) · Σ_k 1/s(b_k))
//! U_i = 100 · ξ_i / max_k ξ_k
//! ```
//!
//! where `s` is the normalized score by default.

use serde::{Deserialize, Serialize};

use crate::aggregate::{collapse_dms, weighted_average, Operator};
use crate::error::{Error, Result};
use crate::ivff::Ivffn;
use crate::pipeline::{rank_indices, ranked, Criterion, CriterionKind, DecisionProblem, RankedAlternative};
use crate::weights::WeightVector;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreMode {
    /// Normalized score in [0, 1].
    #[default]
    Normalized,
    /// Raw score in [−1, 1]; non-positive cost scores are rejected.
    Raw,
}

impl ScoreMode {
    fn score(self, v: &Ivffn) -> f64 {
        let t = v.score_triple();
        match self {
            ScoreMode::Normalized => t.normalized,
            ScoreMode::Raw => t.score,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprasOptions {
    /// Operator combining decision makers cell by cell.
    pub collapse: Operator,
    pub score: ScoreMode,
}

impl Default for CoprasOptions {
    fn default() -> Self {
        CoprasOptions {
            collapse: Operator::Wa,
            score: ScoreMode::Normalized,
        }
    }
}

/// Disjoint benefit and cost column sets covering every criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaPartition {
    benefit: Vec<usize>,
    cost: Vec<usize>,
}

impl CriteriaPartition {
    pub fn new(benefit: Vec<usize>, cost: Vec<usize>, num_criteria: usize) -> Result<Self> {
        let mut seen = vec![false; num_criteria];
        for &j in benefit.iter().chain(&cost) {
            if j >= num_criteria {
                return Err(Error::DimensionMismatch {
                    expected: num_criteria,
                    found: j + 1,
                });
            }
            if seen[j] {
                return Err(Error::OverlapError(j));
            }
            seen[j] = true;
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::IncompletePartition(j));
        }
        if benefit.is_empty() {
            return Err(Error::NoBenefitCriteria);
        }
        Ok(CriteriaPartition { benefit, cost })
    }

    /// Reads the partition off criterion kinds; every criterion needs one.
    pub fn from_criteria(criteria: &[Criterion]) -> Result<Self> {
        if criteria.iter().all(|c| c.kind.is_none()) {
            return Err(Error::NoBenefitCriteria);
        }
        let mut benefit = Vec::new();
        let mut cost = Vec::new();
        for (j, c) in criteria.iter().enumerate() {
            match c.kind {
                Some(CriterionKind::Benefit) => benefit.push(j),
                Some(CriterionKind::Cost) => cost.push(j),
                None => return Err(Error::MissingCriterionKind(c.name.clone())),
            }
        }
        CriteriaPartition::new(benefit, cost, criteria.len())
    }

    pub fn benefit(&self) -> &[usize] {
        &self.benefit
    }

    pub fn cost(&self) -> &[usize] {
        &self.cost
    }
}

fn masked_index(row: &[Ivffn], weights: &WeightVector, mask: &[usize]) -> Result<Ivffn> {
    if row.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: row.len(),
        });
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    if let Some(&j) = mask.iter().find(|&&j| j >= row.len()) {
        return Err(Error::DimensionMismatch {
            expected: row.len(),
            found: j + 1,
        });
    }
    let values: Vec<Ivffn> = mask.iter().map(|&j| row[j]).collect();
    let w: Vec<f64> = mask.iter().map(|&j| weights[j]).collect();
    Ok(weighted_average(&values, &w))
}

/// Maximizing index over the benefit columns of one alternative.
pub fn benefit_index(row: &[Ivffn], weights: &WeightVector, partition: &CriteriaPartition) -> Result<Ivffn> {
    masked_index(row, weights, &partition.benefit)
}

/// Minimizing index over the cost columns of one alternative.
pub fn cost_index(row: &[Ivffn], weights: &WeightVector, partition: &CriteriaPartition) -> Result<Ivffn> {
    masked_index(row, weights, &partition.cost)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoprasIndices {
    pub alternative: String,
    pub benefit: Ivffn,
    /// Absent when no criterion is a cost criterion.
    pub cost: Option<Ivffn>,
    pub relative_degree: f64,
    pub utility: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoprasReport {
    pub problem: String,
    pub weights: Vec<f64>,
    pub benefit_criteria: Vec<String>,
    pub cost_criteria: Vec<String>,
    pub options: CoprasOptions,
    pub indices: Vec<CoprasIndices>,
    pub ranking: Vec<RankedAlternative>,
    pub warnings: Vec<String>,
}

impl CoprasReport {
    pub fn order(&self) -> Vec<&str> {
        self.ranking.iter().map(|r| r.alternative.as_str()).collect()
    }
}

/// Utility degrees are compared after rounding to this resolution so that
/// last-bit noise never decides an order.
const UTILITY_QUANTUM: f64 = 1e-9;

/// COPRAS over explicit rows of a collective matrix.
pub fn copras_rows(
    names: &[String],
    rows: &[&[Ivffn]],
    weights: &WeightVector,
    partition: &CriteriaPartition,
    mode: ScoreMode,
) -> Result<(Vec<CoprasIndices>, Vec<RankedAlternative>)> {
    let a = rows
        .iter()
        .map(|r| benefit_index(r, weights, partition))
        .collect::<Result<Vec<_>>>()?;
    let b = if partition.cost.is_empty() {
        None
    } else {
        Some(
            rows.iter()
                .map(|r| cost_index(r, weights, partition))
                .collect::<Result<Vec<_>>>()?,
        )
    };

    let mut xi: Vec<f64> = a.iter().map(|v| mode.score(v)).collect();
    if let Some(b) = &b {
        let sb: Vec<f64> = b.iter().map(|v| mode.score(v)).collect();
        if let Some(i) = sb.iter().position(|&s| s <= 0.0) {
            return Err(Error::ZeroCostScore {
                alternative: names[i].clone(),
                score: sb[i],
            });
        }
        let total: f64 = sb.iter().sum();
        let harmonic: f64 = sb.iter().map(|s| 1.0 / s).sum();
        for (x, s) in xi.iter_mut().zip(&sb) {
            *x += total / (s * harmonic);
        }
    }
    let max = xi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return Err(Error::NonPositiveUtility(max));
    }
    let utility: Vec<f64> = xi
        .iter()
        .map(|x| if *x == max { 100.0 } else { 100.0 * x / max })
        .collect();

    let key = |i: usize| (utility[i] / UTILITY_QUANTUM).round() as i64;
    let order = rank_indices(names.len(), |p, q| key(q).cmp(&key(p)));
    let indices = names
        .iter()
        .enumerate()
        .map(|(i, name)| CoprasIndices {
            alternative: name.clone(),
            benefit: a[i],
            cost: b.as_ref().map(|b| b[i]),
            relative_degree: xi[i],
            utility: utility[i],
        })
        .collect();
    Ok((indices, ranked(names, &order, |i| utility[i])))
}

/// Ranks the alternatives of `problem` by utility degree.
pub fn copras_rank(
    problem: &DecisionProblem,
    weights: &WeightVector,
    options: &CoprasOptions,
) -> Result<CoprasReport> {
    let partition = CriteriaPartition::from_criteria(problem.criteria())?;
    copras_rank_with(problem, weights, &partition, options)
}

/// As [`copras_rank`] with an explicit partition instead of criterion kinds.
pub fn copras_rank_with(
    problem: &DecisionProblem,
    weights: &WeightVector,
    partition: &CriteriaPartition,
    options: &CoprasOptions,
) -> Result<CoprasReport> {
    let n = problem.criteria().len();
    if weights.len() != n {
        return Err(Error::ShapeMismatch(format!("{} weights for {n} criteria", weights.len())));
    }
    let partition = CriteriaPartition::new(partition.benefit.clone(), partition.cost.clone(), n)?;
    let collective = collapse_dms(problem.matrices(), &problem.influence(), options.collapse)?;
    let rows: Vec<&[Ivffn]> = collective.rows().iter().map(Vec::as_slice).collect();
    let (indices, ranking) = copras_rows(problem.alternatives(), &rows, weights, &partition, options.score)?;
    let names = |mask: &[usize]| -> Vec<String> {
        mask.iter().map(|&j| problem.criteria()[j].name.clone()).collect()
    };
    Ok(CoprasReport {
        problem: problem.name().to_string(),
        weights: weights.as_slice().to_vec(),
        benefit_criteria: names(&partition.benefit),
        cost_criteria: names(&partition.cost),
        options: *options,
        indices,
        ranking,
        warnings: problem.warnings().to_vec(),
    })
}
