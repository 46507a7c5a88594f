//! Criterion weights by maximizing deviation.
//!
//! A criterion on which the alternatives differ more earns more weight.
//! Per decision maker the weights come from the column deviation sums
//! `D_j`; the group vector is the weighted-L1 consensus of the individual
//! vectors, solved as a linear program.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ivff::Ivffn;
use crate::lp::{LpProblem, LpStatus};

/// Tolerance on `Σw = 1` for a [`WeightVector`].
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Tolerance on `Σλ = 1` for influence weights read from user input.
pub const INFLUENCE_SUM_TOL: f64 = 1e-6;

/// One decision maker's judgments: rows are alternatives, columns criteria.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionMatrix {
    dm: String,
    cells: Vec<Vec<Ivffn>>,
    criteria: usize,
}

impl DecisionMatrix {
    pub fn new(dm: impl Into<String>, cells: Vec<Vec<Ivffn>>) -> Result<Self> {
        let dm = dm.into();
        if cells.len() < 2 {
            return Err(Error::TooFewAlternatives {
                min: 2,
                found: cells.len(),
            });
        }
        let criteria = cells[0].len();
        if criteria == 0 {
            return Err(Error::ShapeMismatch(format!("matrix of {dm} has no criteria")));
        }
        if let Some((i, row)) = cells.iter().enumerate().find(|(_, r)| r.len() != criteria) {
            return Err(Error::ShapeMismatch(format!(
                "matrix of {dm}: row {} has {} cells, expected {criteria}",
                i + 1,
                row.len()
            )));
        }
        Ok(DecisionMatrix {
            dm,
            cells,
            criteria,
        })
    }

    pub fn dm(&self) -> &str {
        &self.dm
    }

    pub fn num_alternatives(&self) -> usize {
        self.cells.len()
    }

    pub fn num_criteria(&self) -> usize {
        self.criteria
    }

    pub fn rows(&self) -> &[Vec<Ivffn>] {
        &self.cells
    }

    pub fn cell(&self, alternative: usize, criterion: usize) -> Ivffn {
        self.cells[alternative][criterion]
    }

    pub fn column(&self, criterion: usize) -> impl Iterator<Item = Ivffn> + '_ {
        self.cells.iter().map(move |r| r[criterion])
    }

    /// Keeps the listed alternatives, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Result<Self> {
        DecisionMatrix::new(
            self.dm.clone(),
            keep.iter().map(|&i| self.cells[i].clone()).collect(),
        )
    }

    /// Reorders criteria: column `j` of the result is column `order[j]`.
    pub fn permute_criteria(&self, order: &[usize]) -> Result<Self> {
        DecisionMatrix::new(
            self.dm.clone(),
            self.cells
                .iter()
                .map(|r| order.iter().map(|&j| r[j]).collect())
                .collect(),
        )
    }
}

/// Non-negative weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::BadWeights("empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::BadWeights(format!("weight {w} is negative or not finite")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadWeights(format!("weights sum to {sum}")));
        }
        Ok(WeightVector(weights))
    }

    /// Rescales non-negative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::BadWeights(format!("weight {w} is negative or not finite")));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::BadWeights("weights sum to zero".into()));
        }
        WeightVector::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        WeightVector::new(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Per-criterion total deviation `D_j = Σ_ξ Σ_σ d(F_ξj, F_σj)` over ordered
/// pairs of alternatives.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationTable {
    dm: String,
    totals: Vec<f64>,
}

impl DeviationTable {
    pub fn new(dm: impl Into<String>, totals: Vec<f64>) -> Result<Self> {
        if let Some(d) = totals.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::BadWeights(format!("deviation {d} is negative or not finite")));
        }
        Ok(DeviationTable {
            dm: dm.into(),
            totals,
        })
    }

    pub fn of(matrix: &DecisionMatrix) -> Self {
        let rows = matrix.rows();
        let totals = (0..matrix.num_criteria())
            .map(|j| {
                rows.iter()
                    .map(|a| rows.iter().map(|b| a[j].distance(&b[j])).sum::<f64>())
                    .sum()
            })
            .collect();
        DeviationTable {
            dm: matrix.dm().to_string(),
            totals,
        }
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    fn ensure_informative(&self) -> Result<()> {
        if self.totals.iter().all(|d| *d == 0.0) {
            return Err(Error::AllColumnsConstant {
                dm: self.dm.clone(),
            });
        }
        Ok(())
    }

    /// Maximizer of `Σ w_j D_j` on the surface `Σ w_j³ = 1`, `w ≥ 0`, then
    /// rescaled to sum to one.
    ///
    /// Stationarity gives `D_j = 3μ w_j²`, so `w_j ∝ √D_j`; on the cubic
    /// surface `w_j = √D_j / (Σ D_i^{3/2})^{1/3}`.
    pub fn cubic_weights(&self) -> Result<WeightVector> {
        self.ensure_informative()?;
        let norm = self
            .totals
            .iter()
            .map(|d| d.powf(1.5))
            .sum::<f64>()
            .cbrt();
        let on_surface: Vec<f64> = self.totals.iter().map(|d| d.sqrt() / norm).collect();
        WeightVector::normalized(on_surface)
    }

    /// The Euclidean closed form `w_j = D_j / √(Σ D_i²)`, rescaled to sum
    /// to one, i.e. `D_j / Σ D_i`.
    pub fn euclidean_weights(&self) -> Result<WeightVector> {
        self.ensure_informative()?;
        let norm = self.totals.iter().map(|d| d * d).sum::<f64>().sqrt();
        WeightVector::normalized(self.totals.iter().map(|d| d / norm).collect())
    }

    /// Solves `max Σ w_j D_j` over the simplex. The optimum is a vertex;
    /// when several criteria tie for the largest deviation the weight is
    /// split evenly among them.
    pub fn linear_weights(&self) -> Result<WeightVector> {
        self.ensure_informative()?;
        let n = self.totals.len();
        let lp = LpProblem::new(
            self.totals.iter().map(|d| -d).collect(),
            vec![vec![1.0; n]],
            vec![1.0],
        )?;
        let sol = lp.solve();
        if sol.status != LpStatus::Optimal {
            return Err(Error::Lp(sol.status));
        }
        let best = -sol.objective_value;
        let tol = 1e-12 * best.max(1.0);
        let winners: Vec<usize> = (0..n).filter(|&j| self.totals[j] >= best - tol).collect();
        if winners.is_empty() {
            return Err(Error::Lp(LpStatus::Infeasible));
        }
        let mut w = vec![0.0; n];
        for &j in &winners {
            w[j] = 1.0 / winners.len() as f64;
        }
        WeightVector::new(w)
    }
}

/// Which model turns a decision maker's deviations into weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DmWeightModel {
    /// Cubic-constraint maximizer, normalized ([`DeviationTable::cubic_weights`]).
    #[default]
    Cubic,
    /// Euclidean closed form ([`DeviationTable::euclidean_weights`]).
    Euclidean,
    /// Simplex-constrained linear program ([`DeviationTable::linear_weights`]).
    Linear,
}

impl DmWeightModel {
    pub fn weights(self, table: &DeviationTable) -> Result<WeightVector> {
        match self {
            DmWeightModel::Cubic => table.cubic_weights(),
            DmWeightModel::Euclidean => table.euclidean_weights(),
            DmWeightModel::Linear => table.linear_weights(),
        }
    }
}

pub fn deviation_table(matrix: &DecisionMatrix) -> DeviationTable {
    DeviationTable::of(matrix)
}

pub fn per_dm_weights(matrix: &DecisionMatrix) -> Result<WeightVector> {
    DeviationTable::of(matrix).cubic_weights()
}

pub fn per_dm_weights_lp(matrix: &DecisionMatrix) -> Result<WeightVector> {
    DeviationTable::of(matrix).linear_weights()
}

/// Consensus weights and the value of the weighted disagreement they reach.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupWeights {
    pub weights: WeightVector,
    /// `Σ_k α_k Σ_j |w_j^k − w_j*|` at the returned vector.
    pub objective: f64,
}

/// Checks that influence weights are non-negative and sum to one.
pub fn check_influence(alpha: &[f64]) -> Result<()> {
    let sum: f64 = alpha.iter().sum();
    if alpha.is_empty()
        || alpha.iter().any(|a| !a.is_finite() || *a < 0.0)
        || (sum - 1.0).abs() > INFLUENCE_SUM_TOL
    {
        return Err(Error::BadLambda { sum });
    }
    Ok(())
}

/// `Σ_k α_k Σ_j |w_j^k − x_j|`
pub fn disagreement(per_dm: &[WeightVector], alpha: &[f64], x: &[f64]) -> f64 {
    per_dm
        .iter()
        .zip(alpha)
        .map(|(w, a)| {
            a * w
                .as_slice()
                .iter()
                .zip(x)
                .map(|(wj, xj)| (wj - xj).abs())
                .sum::<f64>()
        })
        .sum()
}

/// Group weights minimizing the influence-weighted L1 disagreement with
/// every decision maker's vector.
///
/// Each `|w_j^k − w_j*|` is split into `φ_j^k + ψ_j^k` with
/// `w_j* + φ_j^k − ψ_j^k = w_j^k`; at a basic optimum at most one of each
/// pair is positive, so the complementarity condition needs no constraint.
/// Variable order is `w*`, then all `φ`, then all `ψ`.
pub fn group_weights(per_dm: &[WeightVector], alpha: &[f64]) -> Result<GroupWeights> {
    let g = per_dm.len();
    if g == 0 {
        return Err(Error::EmptyProblem);
    }
    if alpha.len() != g {
        return Err(Error::DimensionMismatch {
            expected: g,
            found: alpha.len(),
        });
    }
    check_influence(alpha)?;
    let n = per_dm[0].len();
    if let Some(w) = per_dm.iter().find(|w| w.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }

    let vars = n + 2 * g * n;
    let phi = |k: usize, j: usize| n + k * n + j;
    let psi = |k: usize, j: usize| n + g * n + k * n + j;

    let mut c = vec![0.0; vars];
    let mut rows = Vec::with_capacity(g * n + 1);
    let mut rhs = Vec::with_capacity(g * n + 1);
    for (k, (w, &a)) in per_dm.iter().zip(alpha).enumerate() {
        for j in 0..n {
            c[phi(k, j)] = a;
            c[psi(k, j)] = a;
            let mut row = vec![0.0; vars];
            row[j] = 1.0;
            row[phi(k, j)] = 1.0;
            row[psi(k, j)] = -1.0;
            rows.push(row);
            rhs.push(w[j]);
        }
    }
    let mut total = vec![0.0; vars];
    total[..n].fill(1.0);
    rows.push(total);
    rhs.push(1.0);

    let sol = LpProblem::new(c, rows, rhs)?.solve();
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(sol.status));
    }
    let vertex: Vec<f64> = sol.x[..n].iter().map(|v| v.max(0.0)).collect();
    let lp_value = disagreement(per_dm, alpha, &vertex);
    let consensus = match central_optimum(per_dm, alpha, &vertex) {
        Some(c) if disagreement(per_dm, alpha, &c) <= lp_value + 1e-9 => c,
        _ => vertex,
    };
    let weights = WeightVector::normalized(consensus)?;
    let objective = disagreement(per_dm, alpha, weights.as_slice());
    Ok(GroupWeights { weights, objective })
}

const SLOPE_TOL: f64 = 1e-9;

/// One criterion's term `f(x) = Σ_k α_k |x − w^k|` of the disagreement.
struct Term {
    /// `(w^k, α_k)` sorted by position.
    points: Vec<(f64, f64)>,
}

impl Term {
    fn right_slope(&self, x: f64) -> f64 {
        self.points
            .iter()
            .map(|&(w, a)| if w <= x + SLOPE_TOL { a } else { -a })
            .sum()
    }

    fn left_slope(&self, x: f64) -> f64 {
        self.points
            .iter()
            .map(|&(w, a)| if w < x - SLOPE_TOL { a } else { -a })
            .sum()
    }

    /// `0`, `1` and every breakpoint, ascending.
    fn candidates(&self) -> Vec<f64> {
        let mut c: Vec<f64> = std::iter::once(0.0)
            .chain(self.points.iter().map(|p| p.0))
            .chain(std::iter::once(1.0))
            .collect();
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    }

    /// Range of `x ≥ 0` where `μ` is a subgradient (or `x = 0` and `μ` is
    /// below the right slope there).
    fn optimal_range(&self, mu: f64) -> (f64, f64) {
        let c = self.candidates();
        let lo = c
            .iter()
            .copied()
            .find(|&b| self.right_slope(b) >= mu - SLOPE_TOL)
            .unwrap_or(1.0);
        let hi = c
            .iter()
            .copied()
            .rev()
            .find(|&b| b == 0.0 || self.left_slope(b) <= mu + SLOPE_TOL)
            .unwrap_or(0.0);
        (lo, hi.max(lo))
    }
}

/// The optimal set of the consensus problem is a box of per-criterion ranges
/// cut by `Σx = 1`, all sharing one multiplier `μ`. This picks the point that
/// advances every range by the same fraction, so the result depends on
/// neither criterion nor decision-maker order. `None` when `x` fails the
/// optimality conditions numerically.
fn central_optimum(per_dm: &[WeightVector], alpha: &[f64], x: &[f64]) -> Option<Vec<f64>> {
    let terms: Vec<Term> = (0..x.len())
        .map(|j| {
            let mut points: Vec<(f64, f64)> = per_dm.iter().zip(alpha).map(|(w, &a)| (w[j], a)).collect();
            points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
            Term { points }
        })
        .collect();
    let mut mu_lo = f64::NEG_INFINITY;
    let mut mu_hi = f64::INFINITY;
    for (t, &xj) in terms.iter().zip(x) {
        if xj > SLOPE_TOL {
            mu_lo = mu_lo.max(t.left_slope(xj));
        }
        mu_hi = mu_hi.min(t.right_slope(xj));
    }
    if !mu_lo.is_finite() || mu_lo > mu_hi + SLOPE_TOL {
        return None;
    }
    let mu = 0.5 * (mu_lo + mu_hi.max(mu_lo));
    let ranges: Vec<(f64, f64)> = terms.iter().map(|t| t.optimal_range(mu)).collect();
    let low: f64 = ranges.iter().map(|r| r.0).sum();
    let high: f64 = ranges.iter().map(|r| r.1).sum();
    if low > 1.0 + SLOPE_TOL || high < 1.0 - SLOPE_TOL {
        return None;
    }
    let theta = if high - low > 1e-12 {
        ((1.0 - low) / (high - low)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Some(ranges.iter().map(|(lo, hi)| lo + theta * (hi - lo)).collect())
}
