//! Rank-reversal checks under alternative removal and weight noise.
//!
//! Criterion weights are derived once from the full problem and held fixed
//! in every scenario, so only the set of alternatives (or the weights
//! themselves, under perturbation) changes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::collapse_dms;
use crate::copras::{copras_rows, CoprasOptions, CriteriaPartition};
use crate::error::{Error, Result};
use crate::ivff::Ivffn;
use crate::pipeline::{derive_weights, md_rank_rows, DecisionProblem, MdOptions, RankedAlternative};
use crate::weights::{DecisionMatrix, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Ranker {
    Md(MdOptions),
    Copras(CoprasOptions),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalMode {
    /// Scenario k removes the first k alternatives in problem order.
    #[default]
    Cumulative,
    /// Scenario k removes alternative k only.
    OneAtATime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub description: String,
    pub removed: Vec<String>,
    pub ranking: Vec<RankedAlternative>,
}

/// A pair whose strict order in a scenario is the opposite of the base.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reversal {
    pub scenario: usize,
    /// Ranked below `demoted` in the base ranking, above it now.
    pub promoted: String,
    pub demoted: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub pct: f64,
    pub trials: usize,
    pub seed: u64,
    pub base_top: String,
    pub top_choice_preserved: f64,
    pub full_order_preserved: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub problem: String,
    pub ranker: Ranker,
    pub weights: Vec<f64>,
    pub base_ranking: Vec<RankedAlternative>,
    pub scenarios: Vec<Scenario>,
    pub reversals: Vec<Reversal>,
    pub rank_reversal_found: bool,
    pub stability: Option<Stability>,
}

/// Everything a scenario needs: the collective matrix, fixed weights and
/// the ranker.
struct Evaluator<'a> {
    names: &'a [String],
    collective: DecisionMatrix,
    weights: WeightVector,
    ranker: Ranker,
    partition: Option<CriteriaPartition>,
}

impl<'a> Evaluator<'a> {
    fn new(problem: &'a DecisionProblem, ranker: Ranker, weights: WeightVector) -> Result<Self> {
        if weights.len() != problem.criteria().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} criteria",
                weights.len(),
                problem.criteria().len()
            )));
        }
        let (collapse, partition) = match ranker {
            Ranker::Md(o) => (o.collapse, None),
            Ranker::Copras(o) => (o.collapse, Some(CriteriaPartition::from_criteria(problem.criteria())?)),
        };
        Ok(Evaluator {
            names: problem.alternatives(),
            collective: collapse_dms(problem.matrices(), &problem.influence(), collapse)?,
            weights,
            ranker,
            partition,
        })
    }

    fn rank(&self, rows: &[usize], weights: &WeightVector) -> Result<Vec<RankedAlternative>> {
        match (self.ranker, &self.partition) {
            (Ranker::Copras(o), Some(part)) => {
                let names: Vec<String> = rows.iter().map(|&i| self.names[i].clone()).collect();
                let cells: Vec<&[Ivffn]> = rows.iter().map(|&i| self.collective.rows()[i].as_slice()).collect();
                Ok(copras_rows(&names, &cells, weights, part, o.score)?.1)
            }
            (Ranker::Md(o), _) => Ok(md_rank_rows(self.names, &self.collective, rows, weights, o.prefer)),
            (Ranker::Copras(_), None) => unreachable!("partition is built with the evaluator"),
        }
    }

    fn all_rows(&self) -> Vec<usize> {
        (0..self.names.len()).collect()
    }
}

/// Group weights of `problem` under the weight model the ranker implies.
fn default_weights(problem: &DecisionProblem, ranker: &Ranker) -> Result<WeightVector> {
    let model = match ranker {
        Ranker::Md(o) => o.dm_weights,
        Ranker::Copras(_) => MdOptions::default().dm_weights,
    };
    Ok(derive_weights(problem, model)?.1.weights)
}

fn score_of(ranking: &[RankedAlternative], name: &str) -> f64 {
    ranking
        .iter()
        .find(|r| r.alternative == name)
        .map(|r| r.score)
        .expect("scenario ranks only known alternatives")
}

fn strictly_above(a: f64, b: f64) -> bool {
    a - b > 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn find_reversals(base: &[RankedAlternative], scenario: usize, ranking: &[RankedAlternative]) -> Vec<Reversal> {
    let mut out = Vec::new();
    for (p, hi) in ranking.iter().enumerate() {
        for lo in &ranking[p + 1..] {
            // `hi` is strictly above `lo` now; was it strictly below before?
            if !strictly_above(hi.score, lo.score) {
                continue;
            }
            if strictly_above(score_of(base, &lo.alternative), score_of(base, &hi.alternative)) {
                out.push(Reversal {
                    scenario,
                    promoted: hi.alternative.clone(),
                    demoted: lo.alternative.clone(),
                });
            }
        }
    }
    out
}

/// Leave-one-out analysis with group weights derived from the full problem.
pub fn leave_one_out(problem: &DecisionProblem, ranker: Ranker, mode: RemovalMode) -> Result<RobustnessReport> {
    let weights = default_weights(problem, &ranker)?;
    leave_one_out_with_weights(problem, ranker, mode, weights)
}

pub fn leave_one_out_with_weights(
    problem: &DecisionProblem,
    ranker: Ranker,
    mode: RemovalMode,
    weights: WeightVector,
) -> Result<RobustnessReport> {
    let m = problem.alternatives().len();
    if m < 3 {
        return Err(Error::TooFewAlternatives { min: 3, found: m });
    }
    let eval = Evaluator::new(problem, ranker, weights)?;
    let base = eval.rank(&eval.all_rows(), &eval.weights)?;
    let names = problem.alternatives();

    let removals: Vec<Vec<usize>> = match mode {
        RemovalMode::Cumulative => (1..m).map(|k| (0..k).collect()).collect(),
        RemovalMode::OneAtATime => (0..m).map(|k| vec![k]).collect(),
    };
    let mut scenarios = Vec::with_capacity(removals.len());
    let mut reversals = Vec::new();
    for (s, removed) in removals.iter().enumerate() {
        let keep: Vec<usize> = (0..m).filter(|i| !removed.contains(i)).collect();
        let ranking = eval.rank(&keep, &eval.weights)?;
        reversals.extend(find_reversals(&base, s + 1, &ranking));
        let removed: Vec<String> = removed.iter().map(|&i| names[i].clone()).collect();
        scenarios.push(Scenario {
            description: format!("without {}", removed.join(", ")),
            removed,
            ranking,
        });
    }
    Ok(RobustnessReport {
        problem: problem.name().to_string(),
        ranker,
        weights: eval.weights.as_slice().to_vec(),
        base_ranking: base,
        scenarios,
        rank_reversal_found: !reversals.is_empty(),
        reversals,
        stability: None,
    })
}

/// Random multiplicative weight noise with group weights from the full
/// problem.
pub fn perturb_weights(
    problem: &DecisionProblem,
    ranker: Ranker,
    pct: f64,
    trials: usize,
    seed: u64,
) -> Result<RobustnessReport> {
    let weights = default_weights(problem, &ranker)?;
    perturb_weights_with(problem, ranker, weights, pct, trials, seed)
}

/// Each trial scales every weight by an independent factor drawn from
/// U[1 − pct, 1 + pct], renormalizes, and re-ranks all alternatives.
pub fn perturb_weights_with(
    problem: &DecisionProblem,
    ranker: Ranker,
    weights: WeightVector,
    pct: f64,
    trials: usize,
    seed: u64,
) -> Result<RobustnessReport> {
    if !(pct > 0.0 && pct < 1.0) {
        return Err(Error::BadPercentage(pct));
    }
    let eval = Evaluator::new(problem, ranker, weights)?;
    let rows = eval.all_rows();
    let base = eval.rank(&rows, &eval.weights)?;
    let base_order: Vec<&str> = base.iter().map(|r| r.alternative.as_str()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut top, mut full) = (0usize, 0usize);
    for _ in 0..trials {
        let scaled: Vec<f64> = eval
            .weights
            .as_slice()
            .iter()
            .map(|w| w * rng.random_range(1.0 - pct..=1.0 + pct))
            .collect();
        let ranking = eval.rank(&rows, &WeightVector::normalized(scaled)?)?;
        if ranking[0].alternative == base_order[0] {
            top += 1;
        }
        if ranking.iter().map(|r| r.alternative.as_str()).eq(base_order.iter().copied()) {
            full += 1;
        }
    }
    let frac = |k: usize| if trials == 0 { 1.0 } else { k as f64 / trials as f64 };
    Ok(RobustnessReport {
        problem: problem.name().to_string(),
        ranker,
        weights: eval.weights.as_slice().to_vec(),
        stability: Some(Stability {
            pct,
            trials,
            seed,
            base_top: base_order[0].to_string(),
            top_choice_preserved: frac(top),
            full_order_preserved: frac(full),
        }),
        base_ranking: base,
        scenarios: Vec::new(),
        reversals: Vec::new(),
        rank_reversal_found: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{Criterion, CriterionKind, DecisionMaker};
    use crate::scale::{LabelMode, LinguisticScale};

    fn label(l: &str) -> Ivffn {
        LinguisticScale::builtin()
            .lookup(l, LabelMode::Strict)
            .unwrap()
            .value
    }

    fn problem(rows: &[&[&str]]) -> DecisionProblem {
        let n = rows[0].len();
        let cells = rows
            .iter()
            .map(|r| r.iter().map(|l| label(l)).collect())
            .collect();
        DecisionProblem::new(
            "t",
            (1..=rows.len()).map(|i| format!("S{i}")).collect(),
            (0..n)
                .map(|j| Criterion {
                    name: format!("K{}", j + 1),
                    kind: Some(if j == 0 {
                        CriterionKind::Cost
                    } else {
                        CriterionKind::Benefit
                    }),
                })
                .collect(),
            vec![DecisionMaker {
                name: "U1".into(),
                influence: 1.0,
                reference_weights: None,
            }],
            vec![DecisionMatrix::new("U1", cells).unwrap()],
        )
        .unwrap()
    }

    fn rankers() -> [Ranker; 2] {
        [Ranker::Md(MdOptions::default()), Ranker::Copras(CoprasOptions::default())]
    }

    #[test]
    fn cumulative_scenarios_shrink() {
        let p = problem(&[&["L", "SL", "E"], &["E", "H", "SM"], &["SM", "VH", "SL"], &["VL", "E", "H"]]);
        for ranker in rankers() {
            let r = leave_one_out(&p, ranker, RemovalMode::Cumulative).unwrap();
            assert_eq!(r.scenarios.len(), 3);
            for (k, s) in r.scenarios.iter().enumerate() {
                assert_eq!(s.removed.len(), k + 1);
                assert_eq!(s.ranking.len(), 4 - (k + 1));
                let ranks: Vec<usize> = s.ranking.iter().map(|x| x.rank).collect();
                assert_eq!(ranks, (1..=s.ranking.len()).collect::<Vec<_>>());
            }
            assert_eq!(r.scenarios[2].ranking[0].alternative, "S4");
        }
    }

    #[test]
    fn one_at_a_time_covers_each_alternative() {
        let p = problem(&[&["L", "SL"], &["E", "H"], &["SM", "VH"]]);
        let r = leave_one_out(&p, rankers()[0], RemovalMode::OneAtATime).unwrap();
        let removed: Vec<&str> = r.scenarios.iter().map(|s| s.removed[0].as_str()).collect();
        assert_eq!(removed, vec!["S1", "S2", "S3"]);
    }

    #[test]
    fn dominant_alternative_stays_first() {
        let p = problem(&[&["SL", "E", "L"], &["CH", "CH", "CH"], &["E", "SM", "H"], &["H", "L", "E"]]);
        let r = leave_one_out(&p, rankers()[0], RemovalMode::OneAtATime).unwrap();
        for s in &r.scenarios {
            if !s.removed.contains(&"S2".to_string()) {
                assert_eq!(s.ranking[0].alternative, "S2");
            }
        }
        assert!(!r.rank_reversal_found);
    }

    #[test]
    fn identical_rows_never_reverse() {
        let p = problem(&[&["SM", "H"], &["SM", "H"], &["SM", "H"]]);
        let w = WeightVector::uniform(2).unwrap();
        for ranker in rankers() {
            let r = leave_one_out_with_weights(&p, ranker, RemovalMode::Cumulative, w.clone()).unwrap();
            assert!(!r.rank_reversal_found);
            assert!(r.scenarios.iter().all(|s| s.ranking.windows(2).all(|x| x[0].score == x[1].score)));
        }
        let s = perturb_weights_with(&p, rankers()[0], w, 0.2, 25, 3).unwrap().stability.unwrap();
        assert_eq!(s.base_top, "S1");
        assert_eq!(s.top_choice_preserved, 1.0);
        assert_eq!(s.full_order_preserved, 1.0);
    }

    #[test]
    fn reversal_detection() {
        let base = vec![
            RankedAlternative { rank: 1, alternative: "A".into(), score: 0.9 },
            RankedAlternative { rank: 2, alternative: "B".into(), score: 0.8 },
            RankedAlternative { rank: 3, alternative: "C".into(), score: 0.8 },
        ];
        let flipped = vec![
            RankedAlternative { rank: 1, alternative: "B".into(), score: 0.7 },
            RankedAlternative { rank: 2, alternative: "A".into(), score: 0.6 },
        ];
        let r = find_reversals(&base, 1, &flipped);
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].promoted.as_str(), r[0].demoted.as_str()), ("B", "A"));
        // tied in the base, so any order afterwards is fine
        let tie = vec![
            RankedAlternative { rank: 1, alternative: "C".into(), score: 0.7 },
            RankedAlternative { rank: 2, alternative: "B".into(), score: 0.6 },
        ];
        assert!(find_reversals(&base, 1, &tie).is_empty());
    }

    #[test]
    fn too_few_alternatives() {
        let p = problem(&[&["L", "SL"], &["E", "H"]]);
        assert!(matches!(
            leave_one_out(&p, rankers()[0], RemovalMode::Cumulative),
            Err(Error::TooFewAlternatives { min: 3, found: 2 })
        ));
    }

    #[test]
    fn perturbation_is_seeded() {
        let p = problem(&[&["L", "SL", "E"], &["E", "H", "SM"], &["SM", "VH", "SL"], &["VL", "SM", "H"]]);
        let a = perturb_weights(&p, rankers()[1], 0.3, 50, 11).unwrap();
        let b = perturb_weights(&p, rankers()[1], 0.3, 50, 11).unwrap();
        assert_eq!(a, b);
        let tiny = perturb_weights(&p, rankers()[0], 1e-12, 10, 0).unwrap().stability.unwrap();
        assert_eq!(tiny.top_choice_preserved, 1.0);
        assert_eq!(tiny.full_order_preserved, 1.0);
        for pct in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                perturb_weights(&p, rankers()[0], pct, 10, 0),
                Err(Error::BadPercentage(_))
            ));
        }
    }
}
