//! Multi-criteria group ranking with interval-valued Fermatean fuzzy
//! judgments.
//!
//! Criterion weights come from the maximizing-deviation method: a closed
//! form per decision maker, then a linear program that reconciles them into
//! group weights. Alternatives are ranked by aggregated preference values,
//! and can be cross-checked with COPRAS and leave-one-out analysis.
//!
//! ```
//! use ivffmd::{case_study, run, MdOptions};
//!
//! let problem = case_study();
//! let report = run(&problem, &MdOptions::default()).unwrap();
//! assert_eq!(report.ranking.len(), 5);
//! ```

pub mod aggregate;
pub mod copras;
pub mod error;
pub mod ivff;
pub mod lp;
pub mod pipeline;
pub mod problem;
pub mod report;
pub mod robustness;
pub mod scale;
pub mod weights;

pub use aggregate::{collapse_dms, ivffwa, ivffwg, preference_values, Operator, Preference};
pub use copras::{
    benefit_index, copras_rank, copras_rank_with, cost_index, CoprasOptions, CoprasReport,
    CriteriaPartition, ScoreMode,
};
pub use error::{Error, Result};
pub use ivff::{Ivffn, IvffError, ScoreTriple, UnitInterval, EPS};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use pipeline::{
    derive_weights, run, weights_report, Criterion, CriterionKind, DecisionMaker,
    DecisionProblem, MdOptions, RankedAlternative, RankingReport, WeightsReport,
};
pub use problem::{case_study, load_problem, parse_problem, CASE_STUDY_NAME};
pub use robustness::{
    leave_one_out, leave_one_out_with_weights, perturb_weights, perturb_weights_with, Ranker,
    RemovalMode, RobustnessReport,
};
pub use scale::{LabelMode, LinguisticScale};
pub use weights::{
    deviation_table, group_weights, per_dm_weights, per_dm_weights_lp, DecisionMatrix,
    DeviationTable, DmWeightModel, GroupWeights, WeightVector,
};
