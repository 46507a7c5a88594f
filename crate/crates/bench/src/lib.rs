//! Fixtures shared by the benchmarks.

use ivffmd::{Criterion, CriterionKind, DecisionMaker, DecisionMatrix, DecisionProblem, Ivffn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A valid value with grades drawn uniformly under the cubic constraint.
pub fn random_ivffn(rng: &mut impl Rng) -> Ivffn {
    let zu: f64 = rng.random();
    let nu = rng.random::<f64>() * (1.0 - zu.powi(3)).cbrt();
    let zl = zu * rng.random::<f64>();
    let nl = nu * rng.random::<f64>();
    Ivffn::new(zl, zu, nl, nu).expect("sampled inside the domain")
}

/// `dms` decision makers with equal influence judging `m` alternatives on
/// `n` criteria; the first criterion is a cost, the rest are benefits.
pub fn random_problem(m: usize, n: usize, dms: usize, seed: u64) -> DecisionProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = (0..dms)
        .map(|k| {
            let cells = (0..m)
                .map(|_| (0..n).map(|_| random_ivffn(&mut rng)).collect())
                .collect();
            DecisionMatrix::new(format!("D{k}"), cells).expect("rectangular")
        })
        .collect();
    DecisionProblem::new(
        "random",
        (0..m).map(|i| format!("A{i}")).collect(),
        (0..n)
            .map(|j| Criterion {
                name: format!("C{j}"),
                kind: Some(if j == 0 {
                    CriterionKind::Cost
                } else {
                    CriterionKind::Benefit
                }),
            })
            .collect(),
        (0..dms)
            .map(|k| DecisionMaker {
                name: format!("D{k}"),
                influence: 1.0 / dms as f64,
                reference_weights: None,
            })
            .collect(),
        matrices,
    )
    .expect("valid random problem")
}
