//! End-to-end maximizing-deviation ranking.
//!
//! 1. per-DM weights from each judgment matrix,
//! 2. group weights from the consensus LP,
//! 3. cellwise collapse of the DM matrices (WA by default),
//! 4. per-alternative preference values over the criteria (WG by default),
//! 5. ranking by score.
//!
//! Benefit/cost kinds are ignored here: every criterion enters the
//! aggregation as given. Only the COPRAS ranker looks at kinds.

use std::cmp::Ordering;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::aggregate::{collapse_dms, preference_values, Operator, Preference};
use crate::error::{Error, Result};
use crate::ivff::Ivffn;
use crate::weights::{
    check_influence, group_weights, DecisionMatrix, DeviationTable, DmWeightModel, GroupWeights,
    WeightVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Benefit,
    Cost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub kind: Option<CriterionKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionMaker {
    pub name: String,
    pub influence: f64,
    /// Published weights to audit the computed ones against.
    pub reference_weights: Option<Vec<f64>>,
}

/// Alternatives, criteria and every decision maker's judgments.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionProblem {
    name: String,
    alternatives: Vec<String>,
    criteria: Vec<Criterion>,
    dms: Vec<DecisionMaker>,
    matrices: Vec<DecisionMatrix>,
    reference_group_weights: Option<Vec<f64>>,
    warnings: Vec<String>,
}

impl DecisionProblem {
    pub fn new(
        name: impl Into<String>,
        alternatives: Vec<String>,
        criteria: Vec<Criterion>,
        dms: Vec<DecisionMaker>,
        matrices: Vec<DecisionMatrix>,
    ) -> Result<Self> {
        if alternatives.is_empty() || criteria.is_empty() || dms.is_empty() {
            return Err(Error::EmptyProblem);
        }
        if alternatives.len() < 2 {
            return Err(Error::TooFewAlternatives {
                min: 2,
                found: alternatives.len(),
            });
        }
        if matrices.len() != dms.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} decision makers but {} matrices",
                dms.len(),
                matrices.len()
            )));
        }
        let influence: Vec<f64> = dms.iter().map(|d| d.influence).collect();
        check_influence(&influence)?;
        for m in &matrices {
            if m.num_alternatives() != alternatives.len() || m.num_criteria() != criteria.len() {
                return Err(Error::ShapeMismatch(format!(
                    "matrix of {} is {} alternatives x {} criteria, expected {} x {}",
                    m.dm(),
                    m.num_alternatives(),
                    m.num_criteria(),
                    alternatives.len(),
                    criteria.len()
                )));
            }
        }
        Ok(DecisionProblem {
            name: name.into(),
            alternatives,
            criteria,
            dms,
            matrices,
            reference_group_weights: None,
            warnings: Vec::new(),
        })
    }

    pub fn with_reference_group_weights(mut self, weights: Option<Vec<f64>>) -> Self {
        self.reference_group_weights = weights;
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn dms(&self) -> &[DecisionMaker] {
        &self.dms
    }

    pub fn matrices(&self) -> &[DecisionMatrix] {
        &self.matrices
    }

    pub fn influence(&self) -> Vec<f64> {
        self.dms.iter().map(|d| d.influence).collect()
    }

    pub fn reference_group_weights(&self) -> Option<&[f64]> {
        self.reference_group_weights.as_deref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Keeps the listed alternatives in the given order.
    pub fn select_alternatives(&self, keep: &[usize]) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.select_rows(keep))
            .collect::<Result<Vec<_>>>()?;
        Ok(DecisionProblem {
            alternatives: keep.iter().map(|&i| self.alternatives[i].clone()).collect(),
            matrices,
            ..self.clone()
        })
    }

    /// Reorders decision makers together with their matrices.
    pub fn select_dms(&self, order: &[usize]) -> Result<Self> {
        DecisionProblem::new(
            self.name.clone(),
            self.alternatives.clone(),
            self.criteria.clone(),
            order.iter().map(|&k| self.dms[k].clone()).collect(),
            order.iter().map(|&k| self.matrices[k].clone()).collect(),
        )
        .map(|p| {
            p.with_reference_group_weights(self.reference_group_weights.clone())
                .with_warnings(self.warnings.clone())
        })
    }

    /// Replaces the matrices, keeping everything else.
    pub fn with_matrices(&self, matrices: Vec<DecisionMatrix>) -> Result<Self> {
        DecisionProblem::new(
            self.name.clone(),
            self.alternatives.clone(),
            self.criteria.clone(),
            self.dms.clone(),
            matrices,
        )
        .map(|p| {
            p.with_reference_group_weights(self.reference_group_weights.clone())
                .with_warnings(self.warnings.clone())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdOptions {
    pub dm_weights: DmWeightModel,
    /// Operator combining decision makers cell by cell.
    pub collapse: Operator,
    /// Operator combining criteria into one preference value.
    pub prefer: Operator,
}

impl Default for MdOptions {
    fn default() -> Self {
        MdOptions {
            dm_weights: DmWeightModel::Cubic,
            collapse: Operator::Wa,
            prefer: Operator::Wg,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmWeights {
    pub dm: String,
    pub influence: f64,
    pub deviations: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternativePreference {
    pub alternative: String,
    pub value: Ivffn,
    pub score: f64,
    pub accuracy: f64,
    pub normalized_score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedAlternative {
    pub rank: usize,
    pub alternative: String,
    /// The quantity ranked on: normalized score for the MD ranker,
    /// utility degree for COPRAS.
    pub score: f64,
}

/// Gap between computed weights and a published reference vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub subject: String,
    pub reference: Vec<f64>,
    /// computed − reference, per criterion
    pub deviations: Vec<f64>,
    pub max_abs_deviation: f64,
}

impl ReferenceCheck {
    fn new(subject: String, computed: &[f64], reference: &[f64]) -> Self {
        let deviations: Vec<f64> = computed
            .iter()
            .zip(reference)
            .map(|(c, r)| c - r)
            .collect();
        let max_abs_deviation = deviations.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        ReferenceCheck {
            subject,
            reference: reference.to_vec(),
            deviations,
            max_abs_deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub options: MdOptions,
    pub warnings: Vec<String>,
    pub reference_checks: Vec<ReferenceCheck>,
    /// Wall-clock stage timings. Kept out of machine reports so that those
    /// stay byte-identical across runs.
    #[serde(skip)]
    pub timings: Vec<StageTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub problem: String,
    pub criteria: Vec<String>,
    pub per_dm_weights: Vec<DmWeights>,
    pub group_weights: Vec<f64>,
    /// Weighted disagreement reached by the group weights.
    pub group_objective: f64,
    pub preferences: Vec<AlternativePreference>,
    pub ranking: Vec<RankedAlternative>,
    pub provenance: Provenance,
}

impl RankingReport {
    pub fn order(&self) -> Vec<&str> {
        self.ranking.iter().map(|r| r.alternative.as_str()).collect()
    }
}

/// Per-DM deviation tables and weights.
pub fn dm_weights(
    problem: &DecisionProblem,
    model: DmWeightModel,
) -> Result<Vec<(DeviationTable, WeightVector)>> {
    problem
        .matrices
        .iter()
        .map(|m| {
            let table = DeviationTable::of(m);
            let w = model.weights(&table)?;
            Ok((table, w))
        })
        .collect()
}

/// Per-DM and group weights.
pub fn derive_weights(
    problem: &DecisionProblem,
    model: DmWeightModel,
) -> Result<(Vec<(DeviationTable, WeightVector)>, GroupWeights)> {
    let per_dm = dm_weights(problem, model)?;
    let vectors: Vec<WeightVector> = per_dm.iter().map(|(_, w)| w.clone()).collect();
    let group = group_weights(&vectors, &problem.influence())?;
    Ok((per_dm, group))
}

/// Orders `0..len` best-first with `cmp`, keeping input order on ties.
pub(crate) fn rank_indices<F>(len: usize, mut cmp: F) -> Vec<usize>
where
    F: FnMut(usize, usize) -> Ordering,
{
    let mut idx: Vec<usize> = (0..len).collect();
    idx.sort_by(|&a, &b| cmp(a, b));
    idx
}

pub(crate) fn ranked(names: &[String], order: &[usize], score: impl Fn(usize) -> f64) -> Vec<RankedAlternative> {
    order
        .iter()
        .enumerate()
        .map(|(pos, &i)| RankedAlternative {
            rank: pos + 1,
            alternative: names[i].clone(),
            score: score(i),
        })
        .collect()
}

/// Ranks preference values best-first by [`Ivffn::rank_cmp`].
pub fn rank_preferences(names: &[String], prefs: &[Preference]) -> Vec<RankedAlternative> {
    let order = rank_indices(prefs.len(), |a, b| prefs[a].value.rank_cmp(&prefs[b].value));
    ranked(names, &order, |i| prefs[i].scores.normalized)
}

/// Preference values and ranking with fixed group weights, over the rows
/// listed in `rows`.
pub(crate) fn md_rank_rows(
    names: &[String],
    collective: &DecisionMatrix,
    rows: &[usize],
    weights: &WeightVector,
    prefer: Operator,
) -> Vec<RankedAlternative> {
    let prefs: Vec<Preference> = rows
        .iter()
        .map(|&i| Preference::new(prefer.apply_raw(&collective.rows()[i], weights.as_slice())))
        .collect();
    let sub_names: Vec<String> = rows.iter().map(|&i| names[i].clone()).collect();
    rank_preferences(&sub_names, &prefs)
}

fn summarize_weights(
    problem: &DecisionProblem,
    per_dm: &[(DeviationTable, WeightVector)],
    group: &GroupWeights,
) -> (Vec<DmWeights>, Vec<ReferenceCheck>) {
    let mut checks = Vec::new();
    for (dm, (_, w)) in problem.dms.iter().zip(per_dm) {
        if let Some(reference) = &dm.reference_weights {
            checks.push(ReferenceCheck::new(
                format!("weights of {}", dm.name),
                w.as_slice(),
                reference,
            ));
        }
    }
    if let Some(reference) = &problem.reference_group_weights {
        checks.push(ReferenceCheck::new(
            "group weights".into(),
            group.weights.as_slice(),
            reference,
        ));
    }
    let summary = problem
        .dms
        .iter()
        .zip(per_dm)
        .map(|(dm, (table, w))| DmWeights {
            dm: dm.name.clone(),
            influence: dm.influence,
            deviations: table.totals().to_vec(),
            weights: w.as_slice().to_vec(),
        })
        .collect();
    (summary, checks)
}

/// Criterion weights only, without ranking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightsReport {
    pub problem: String,
    pub model: DmWeightModel,
    pub criteria: Vec<String>,
    pub per_dm_weights: Vec<DmWeights>,
    pub group_weights: Vec<f64>,
    pub group_objective: f64,
    pub reference_checks: Vec<ReferenceCheck>,
    pub warnings: Vec<String>,
}

pub fn weights_report(problem: &DecisionProblem, model: DmWeightModel) -> Result<WeightsReport> {
    let (per_dm, group) = derive_weights(problem, model)?;
    let (per_dm_weights, reference_checks) = summarize_weights(problem, &per_dm, &group);
    Ok(WeightsReport {
        problem: problem.name.clone(),
        model,
        criteria: problem.criteria.iter().map(|c| c.name.clone()).collect(),
        per_dm_weights,
        group_weights: group.weights.as_slice().to_vec(),
        group_objective: group.objective,
        reference_checks,
        warnings: problem.warnings.clone(),
    })
}

/// Runs the whole procedure and gathers every intermediate result.
pub fn run(problem: &DecisionProblem, options: &MdOptions) -> Result<RankingReport> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: &str, timings: &mut Vec<StageTiming>| {
        timings.push(StageTiming {
            stage: stage.to_string(),
            micros: clock.elapsed().as_micros() as u64,
        });
        clock = Instant::now();
    };

    let (per_dm, group) = derive_weights(problem, options.dm_weights)?;
    lap("weights", &mut timings);
    let collective = collapse_dms(&problem.matrices, &problem.influence(), options.collapse)?;
    lap("collapse", &mut timings);
    let prefs = preference_values(&collective, &group.weights, options.prefer)?;
    let ranking = rank_preferences(&problem.alternatives, &prefs);
    lap("rank", &mut timings);

    let (per_dm_weights, reference_checks) = summarize_weights(problem, &per_dm, &group);

    Ok(RankingReport {
        problem: problem.name.clone(),
        criteria: problem.criteria.iter().map(|c| c.name.clone()).collect(),
        per_dm_weights,
        group_weights: group.weights.as_slice().to_vec(),
        group_objective: group.objective,
        preferences: problem
            .alternatives
            .iter()
            .zip(&prefs)
            .map(|(name, p)| AlternativePreference {
                alternative: name.clone(),
                value: p.value,
                score: p.scores.score,
                accuracy: p.scores.accuracy,
                normalized_score: p.scores.normalized,
            })
            .collect(),
        ranking,
        provenance: Provenance {
            options: *options,
            warnings: problem.warnings.clone(),
            reference_checks,
            timings,
        },
    })
}
