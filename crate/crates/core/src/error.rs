use thiserror::Error;

use crate::ivff::IvffError;
use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ivff(#[from] IvffError),

    #[error("unknown linguistic label {token:?}{}", location.as_deref().map(|l| format!(" at {l}")).unwrap_or_default())]
    UnknownLabel {
        token: String,
        location: Option<String>,
    },

    #[error("{context}: {message}")]
    Syntax { context: String, message: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("influence weights must be non-negative and sum to 1 (sum = {sum})")]
    BadLambda { sum: f64 },

    #[error("invalid weight vector: {0}")]
    BadWeights(String),

    #[error("every criterion column of {dm} is constant; deviation weights are undefined")]
    AllColumnsConstant { dm: String },

    #[error("linear program ended with status {0:?}")]
    Lp(LpStatus),

    #[error("problem has no alternatives, criteria or decision makers")]
    EmptyProblem,

    #[error("no criterion is marked as a benefit criterion")]
    NoBenefitCriteria,

    #[error("criterion {0} has no benefit/cost kind")]
    MissingCriterionKind(String),

    #[error("criterion mask selects no columns")]
    EmptyMask,

    #[error("criterion {0} appears in both the benefit and the cost mask")]
    OverlapError(usize),

    #[error("criterion {0} is in neither the benefit nor the cost mask")]
    IncompletePartition(usize),

    #[error("cost index of {alternative} has non-positive score {score}")]
    ZeroCostScore { alternative: String, score: f64 },

    #[error("largest relative degree is {0}; utility degrees need a positive maximum")]
    NonPositiveUtility(f64),

    #[error("at least {min} alternatives are required, found {found}")]
    TooFewAlternatives { min: usize, found: usize },

    #[error("perturbation percentage must lie in (0, 1), got {0}")]
    BadPercentage(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that signal a defect in this crate rather than in the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Lp(_) | Error::Json(_))
    }
}
