use ivffmd::report::{from_machine, to_machine};
use ivffmd::{
    case_study, copras_rank, derive_weights, leave_one_out, perturb_weights, run, weights_report,
    CoprasOptions, CoprasReport, Criterion, DecisionMaker, DecisionMatrix, DecisionProblem,
    DmWeightModel, Ivffn, MdOptions, Ranker, RankingReport, RemovalMode, RobustnessReport,
    WeightsReport,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ivffn(rng: &mut impl Rng) -> Ivffn {
    let zu: f64 = rng.random();
    let nu = rng.random::<f64>() * (1.0 - zu.powi(3)).cbrt();
    Ivffn::new(zu * rng.random::<f64>(), zu, nu * rng.random::<f64>(), nu).unwrap()
}

fn random_problem(rng: &mut impl Rng, m: usize, n: usize, g: usize) -> DecisionProblem {
    let raw: Vec<f64> = (0..g).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = raw.iter().sum();
    let mut lambda: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = lambda[..g - 1].iter().sum();
    lambda[g - 1] = 1.0 - head;
    let matrices = (0..g)
        .map(|k| {
            let cells = (0..m)
                .map(|_| (0..n).map(|_| random_ivffn(rng)).collect())
                .collect();
            DecisionMatrix::new(format!("D{k}"), cells).unwrap()
        })
        .collect();
    DecisionProblem::new(
        "random",
        (0..m).map(|i| format!("A{i}")).collect(),
        (0..n)
            .map(|j| Criterion {
                name: format!("C{j}"),
                kind: None,
            })
            .collect(),
        lambda
            .iter()
            .enumerate()
            .map(|(k, &l)| DecisionMaker {
                name: format!("D{k}"),
                influence: l,
                reference_weights: None,
            })
            .collect(),
        matrices,
    )
    .unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn report_invariants_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..25 {
        let (m, n, g) = (rng.random_range(2..7), rng.random_range(1..6), rng.random_range(1..5));
        let p = random_problem(&mut rng, m, n, g);
        let r = run(&p, &MdOptions::default()).unwrap();
        assert!((r.group_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(r.group_weights.iter().all(|&w| w >= 0.0));
        for d in &r.per_dm_weights {
            assert!((d.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let mut names: Vec<&str> = r.order();
        names.sort_unstable();
        let mut expect: Vec<&str> = p.alternatives().iter().map(String::as_str).collect();
        expect.sort_unstable();
        assert_eq!(names, expect);
        assert!(r.ranking.windows(2).all(|w| w[0].score >= w[1].score - 1e-12));
    }
}

#[test]
fn ranking_follows_alternative_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = random_problem(&mut rng, 5, 4, 3);
        let mut order: Vec<usize> = (0..5).collect();
        order.shuffle(&mut rng);
        let q = p.select_alternatives(&order).unwrap();
        let a = run(&p, &MdOptions::default()).unwrap();
        let b = run(&q, &MdOptions::default()).unwrap();
        assert!(max_abs_diff(&a.group_weights, &b.group_weights) < 1e-9);
        for pa in &a.preferences {
            let pb = b.preferences.iter().find(|x| x.alternative == pa.alternative).unwrap();
            assert!((pa.score - pb.score).abs() < 1e-12);
        }
    }
}

#[test]
fn report_ignores_dm_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let p = random_problem(&mut rng, 4, 4, 4);
        let mut order: Vec<usize> = (0..4).collect();
        order.shuffle(&mut rng);
        let q = p.select_dms(&order).unwrap();
        let a = run(&p, &MdOptions::default()).unwrap();
        let b = run(&q, &MdOptions::default()).unwrap();
        assert!(max_abs_diff(&a.group_weights, &b.group_weights) < 1e-9, "{:?} {:?}", a.group_weights, b.group_weights);
        assert!((a.group_objective - b.group_objective).abs() < 1e-9);
        assert_eq!(a.order(), b.order());
    }
}

#[test]
fn weights_follow_criterion_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let p = random_problem(&mut rng, 4, 5, 3);
        let mut order: Vec<usize> = (0..5).collect();
        order.shuffle(&mut rng);
        let matrices = p
            .matrices()
            .iter()
            .map(|m| m.permute_criteria(&order).unwrap())
            .collect();
        let q = DecisionProblem::new(
            "permuted",
            p.alternatives().to_vec(),
            order.iter().map(|&j| p.criteria()[j].clone()).collect(),
            p.dms().to_vec(),
            matrices,
        )
        .unwrap();
        let a = weights_report(&p, DmWeightModel::Cubic).unwrap();
        let b = weights_report(&q, DmWeightModel::Cubic).unwrap();
        let permuted: Vec<f64> = order.iter().map(|&j| a.group_weights[j]).collect();
        assert!(max_abs_diff(&permuted, &b.group_weights) < 1e-9, "{permuted:?} {:?}", b.group_weights);
        for (x, y) in a.per_dm_weights.iter().zip(&b.per_dm_weights) {
            let px: Vec<f64> = order.iter().map(|&j| x.weights[j]).collect();
            assert!(max_abs_diff(&px, &y.weights) < 1e-12);
        }
    }
}

#[test]
fn constant_column_earns_zero_weight() {
    let p = case_study();
    let filler = Ivffn::new(0.6, 0.65, 0.35, 0.4).unwrap();
    let matrices = p
        .matrices()
        .iter()
        .map(|m| {
            let rows = m
                .rows()
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.push(filler);
                    r
                })
                .collect();
            DecisionMatrix::new(m.dm(), rows).unwrap()
        })
        .collect();
    let mut criteria = p.criteria().to_vec();
    criteria.push(Criterion {
        name: "K11".into(),
        kind: None,
    });
    let q = DecisionProblem::new("wider", p.alternatives().to_vec(), criteria, p.dms().to_vec(), matrices).unwrap();
    let a = run(&p, &MdOptions::default()).unwrap();
    let b = run(&q, &MdOptions::default()).unwrap();
    assert_eq!(b.group_weights[10], 0.0);
    for (x, y) in a.per_dm_weights.iter().zip(&b.per_dm_weights) {
        assert_eq!(y.weights[10], 0.0);
        // cubic normalization rescales the remaining weights by one factor
        let ratio = y.weights[0] / x.weights[0];
        for (wx, wy) in x.weights.iter().zip(&y.weights) {
            assert!((wy - wx * ratio).abs() < 1e-12);
        }
    }
    assert_eq!(a.order(), b.order());
}

#[test]
fn reports_are_reproducible_and_reparse() {
    let p = case_study();
    let md = run(&p, &MdOptions::default()).unwrap();
    let text = to_machine(&md).unwrap();
    assert_eq!(text, to_machine(&run(&p, &MdOptions::default()).unwrap()).unwrap());
    let back: RankingReport = from_machine(&text).unwrap();
    assert!(max_abs_diff(&md.group_weights, &back.group_weights) <= 5e-7);
    for (a, b) in md.preferences.iter().zip(&back.preferences) {
        assert!(max_abs_diff(&a.value.grades(), &b.value.grades()) <= 5e-7);
        assert!((a.normalized_score - b.normalized_score).abs() <= 5e-7);
    }
    assert!(back.provenance.timings.is_empty());

    let w = weights_report(&p, DmWeightModel::Cubic).unwrap();
    let back: WeightsReport = from_machine(&to_machine(&w).unwrap()).unwrap();
    assert!(max_abs_diff(&w.group_weights, &back.group_weights) <= 5e-7);

    let weights = derive_weights(&p, DmWeightModel::Cubic).unwrap().1.weights;
    let c = copras_rank(&p, &weights, &CoprasOptions::default()).unwrap();
    let back: CoprasReport = from_machine(&to_machine(&c).unwrap()).unwrap();
    assert_eq!(c.order(), back.order());

    let ranker = Ranker::Copras(CoprasOptions::default());
    let r = leave_one_out(&p, ranker, RemovalMode::Cumulative).unwrap();
    let back: RobustnessReport = from_machine(&to_machine(&r).unwrap()).unwrap();
    assert_eq!(back.scenarios.len(), 4);
    assert_eq!(back.rank_reversal_found, r.rank_reversal_found);

    let s1 = perturb_weights(&p, ranker, 0.1, 50, 9).unwrap();
    let s2 = perturb_weights(&p, ranker, 0.1, 50, 9).unwrap();
    assert_eq!(to_machine(&s1).unwrap(), to_machine(&s2).unwrap());
}

#[test]
fn copras_equal_cost_columns_follow_benefit_scores() {
    use ivffmd::{CriterionKind, ScoreMode};
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let base = random_problem(&mut rng, 5, 3, 1);
        let cost = random_ivffn(&mut rng);
        let rows = base.matrices()[0]
            .rows()
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r[2] = cost;
                r
            })
            .collect();
        let mut criteria = base.criteria().to_vec();
        criteria[0].kind = Some(CriterionKind::Benefit);
        criteria[1].kind = Some(CriterionKind::Benefit);
        criteria[2].kind = Some(CriterionKind::Cost);
        let p = DecisionProblem::new(
            "c",
            base.alternatives().to_vec(),
            criteria,
            base.dms().to_vec(),
            vec![DecisionMatrix::new("D0", rows).unwrap()],
        )
        .unwrap();
        let w = ivffmd::WeightVector::new(vec![0.3, 0.3, 0.4]).unwrap();
        let c = copras_rank(&p, &w, &CoprasOptions { score: ScoreMode::Normalized, ..Default::default() });
        let Ok(c) = c else { continue };
        let mut by_benefit: Vec<(String, f64)> = c
            .indices
            .iter()
            .map(|x| (x.alternative.clone(), x.benefit.score_triple().normalized))
            .collect();
        by_benefit.sort_by(|a, b| b.1.total_cmp(&a.1));
        let expect: Vec<&str> = by_benefit.iter().map(|x| x.0.as_str()).collect();
        assert_eq!(c.order(), expect);
    }
}
