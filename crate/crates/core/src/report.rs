//! Report emission: rounded JSON for machines, aligned tables for people.
//!
//! Both forms render the same report value; nothing is recomputed here.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Number, Value};

use crate::copras::CoprasReport;
use crate::error::Result;
use crate::pipeline::{DmWeights, RankedAlternative, RankingReport, ReferenceCheck, WeightsReport};
use crate::robustness::{Ranker, RobustnessReport};

/// Decimal places kept for every float in a machine report.
pub const DECIMALS: i32 = 6;

fn round(x: f64) -> f64 {
    let scale = 10f64.powi(DECIMALS);
    let r = (x * scale).round() / scale;
    // no negative zero in output
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            *v = Number::from_f64(round(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to [`DECIMALS`] places, newline-terminated.
pub fn to_machine<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_numbers(&mut v);
    let mut out = serde_json::to_string_pretty(&v)?;
    out.push('\n');
    Ok(out)
}

pub fn from_machine<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Column-aligned plain-text table.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    fn render(&self, out: &mut String) {
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        // numeric columns are right-aligned, text columns left-aligned
        let numeric: Vec<bool> = (0..cols)
            .map(|i| {
                !self.rows.is_empty()
                    && self.rows.iter().all(|r| {
                        r.get(i)
                            .is_some_and(|c| c == "-" || c.is_empty() || c.parse::<f64>().is_ok())
                    })
            })
            .collect();
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let mut line = String::from(" ");
            for ((c, w), right) in r.iter().zip(&width).zip(&numeric) {
                if *right {
                    let _ = write!(line, " {c:>w$}");
                } else {
                    let _ = write!(line, " {c:<w$}");
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

fn f3(x: f64) -> String {
    format!("{x:.3}")
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

fn weights_block(out: &mut String, criteria: &[String], per_dm: &[DmWeights], group: &[f64], objective: f64) {
    out.push_str("criterion weights\n");
    let mut t = Table::new(
        ["", "lambda"]
            .into_iter()
            .map(String::from)
            .chain(criteria.iter().cloned()),
    );
    for d in per_dm {
        t.row([d.dm.clone(), f3(d.influence)].into_iter().chain(d.weights.iter().map(|w| f3(*w))));
    }
    t.row(["group".to_string(), String::new()].into_iter().chain(group.iter().map(|w| f3(*w))));
    t.render(out);
    let _ = writeln!(out, "  group disagreement {}", f4(objective));
}

fn checks_block(out: &mut String, checks: &[ReferenceCheck]) {
    if checks.is_empty() {
        return;
    }
    out.push_str("\nagainst reference weights\n");
    let mut t = Table::new(["subject", "max |diff|"]);
    for c in checks {
        t.row([c.subject.clone(), f3(c.max_abs_deviation)]);
    }
    t.render(out);
}

fn warnings_block(out: &mut String, warnings: &[String]) {
    if warnings.is_empty() {
        return;
    }
    out.push_str("\nwarnings\n");
    for w in warnings {
        let _ = writeln!(out, "  {w}");
    }
}

fn ranking_table(out: &mut String, ranking: &[RankedAlternative], score: &str) {
    let mut t = Table::new(["rank", "alternative", score]);
    for r in ranking {
        t.row([r.rank.to_string(), r.alternative.clone(), f4(r.score)]);
    }
    t.render(out);
}

pub fn render_weights(r: &WeightsReport) -> String {
    let mut out = format!("{}\n\n", r.problem);
    weights_block(&mut out, &r.criteria, &r.per_dm_weights, &r.group_weights, r.group_objective);
    checks_block(&mut out, &r.reference_checks);
    warnings_block(&mut out, &r.warnings);
    out
}

pub fn render_ranking(r: &RankingReport) -> String {
    let mut out = format!("{}\n\n", r.problem);
    weights_block(&mut out, &r.criteria, &r.per_dm_weights, &r.group_weights, r.group_objective);

    out.push_str("\npreference values\n");
    let mut t = Table::new(["alternative", "value", "score", "accuracy", "normalized"]);
    for p in &r.preferences {
        t.row([
            p.alternative.clone(),
            format!("{:.3}", p.value),
            f4(p.score),
            f4(p.accuracy),
            f4(p.normalized_score),
        ]);
    }
    t.render(&mut out);

    out.push_str("\nranking\n");
    ranking_table(&mut out, &r.ranking, "normalized score");
    checks_block(&mut out, &r.provenance.reference_checks);
    warnings_block(&mut out, &r.provenance.warnings);
    if !r.provenance.timings.is_empty() {
        out.push_str("\ntimings\n");
        for s in &r.provenance.timings {
            let _ = writeln!(out, "  {} {} us", s.stage, s.micros);
        }
    }
    out
}

pub fn render_copras(r: &CoprasReport) -> String {
    let mut out = format!("{}\n\n", r.problem);
    let _ = writeln!(out, "benefit criteria: {}", r.benefit_criteria.join(" "));
    let _ = writeln!(out, "cost criteria:    {}", r.cost_criteria.join(" "));
    out.push('\n');
    let mut t = Table::new(["alternative", "benefit index", "cost index", "relative degree", "utility"]);
    for c in &r.indices {
        t.row([
            c.alternative.clone(),
            format!("{:.3}", c.benefit),
            c.cost.map(|b| format!("{b:.3}")).unwrap_or_else(|| "-".into()),
            f4(c.relative_degree),
            f4(c.utility),
        ]);
    }
    t.render(&mut out);
    out.push_str("\nranking\n");
    ranking_table(&mut out, &r.ranking, "utility");
    warnings_block(&mut out, &r.warnings);
    out
}

pub fn render_robustness(r: &RobustnessReport) -> String {
    let mut out = format!("{}\n\n", r.problem);
    let method = match r.ranker {
        Ranker::Md(_) => "maximizing deviation",
        Ranker::Copras(_) => "COPRAS",
    };
    let _ = writeln!(out, "ranker: {method}");
    let base: Vec<&str> = r.base_ranking.iter().map(|x| x.alternative.as_str()).collect();
    let _ = writeln!(out, "base ranking: {}", base.join(" > "));

    if !r.scenarios.is_empty() {
        out.push_str("\nleave-one-out\n");
        let mut header = vec!["alternative".to_string(), "base".to_string()];
        header.extend((1..=r.scenarios.len()).map(|k| format!("#{k}")));
        let mut t = Table::new(header);
        let mut names: Vec<&str> = base.clone();
        names.sort_unstable();
        for name in names {
            let mut row = vec![name.to_string()];
            let rank_in = |ranking: &[RankedAlternative]| {
                ranking
                    .iter()
                    .find(|x| x.alternative == name)
                    .map_or("-".to_string(), |x| x.rank.to_string())
            };
            row.push(rank_in(&r.base_ranking));
            row.extend(r.scenarios.iter().map(|s| rank_in(&s.ranking)));
            t.row(row);
        }
        t.render(&mut out);
        for (k, s) in r.scenarios.iter().enumerate() {
            let _ = writeln!(out, "  #{} {}", k + 1, s.description);
        }
        if r.rank_reversal_found {
            out.push_str("rank reversal found\n");
            for v in &r.reversals {
                let _ = writeln!(out, "  #{}: {} now above {}", v.scenario, v.promoted, v.demoted);
            }
        } else {
            out.push_str("no rank reversal\n");
        }
    }

    if let Some(s) = &r.stability {
        out.push_str("\nweight perturbation\n");
        let _ = writeln!(
            out,
            "  ±{:.0}% over {} trials (seed {}): top choice {} kept in {:.1}%, full order kept in {:.1}%",
            s.pct * 100.0,
            s.trials,
            s.seed,
            s.base_top,
            s.top_choice_preserved * 100.0,
            s.full_order_preserved * 100.0
        );
    }
    out
}
