//! TOML problem files.
//!
//! Judgment matrices are written criteria-as-rows, one column per
//! alternative, and transposed on load. Cells are scale labels or inline
//! `[ζL, ζU, ηL, ηU]` arrays; both may be mixed in one matrix.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ivff::Ivffn;
use crate::pipeline::{Criterion, CriterionKind, DecisionMaker, DecisionProblem};
use crate::scale::{LabelMode, LinguisticScale, BUILTIN_NAME};
use crate::weights::DecisionMatrix;

/// The bundled case study, loadable by the name `case_study`.
pub const CASE_STUDY_TOML: &str = include_str!("../data/case_study.toml");
pub const CASE_STUDY_NAME: &str = "case_study";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    meta: Meta,
    #[serde(default)]
    scale: ScaleSpec,
    alternatives: Alternatives,
    criteria: Vec<CriterionSpec>,
    dms: Vec<DmSpec>,
    #[serde(default)]
    reference: Reference,
    matrices: BTreeMap<String, Vec<Vec<Cell>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Meta {
    name: String,
    #[serde(default)]
    label_repair: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScaleSpec {
    builtin: Option<String>,
    entries: Option<BTreeMap<String, [f64; 4]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Alternatives {
    names: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CriterionSpec {
    name: String,
    #[allow(dead_code)]
    description: Option<String>,
    kind: Option<CriterionKind>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DmSpec {
    name: String,
    lambda: f64,
    reference_weights: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Reference {
    group_weights: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Cell {
    Label(String),
    Grades([f64; 4]),
}

fn syntax(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Syntax {
        context: context.into(),
        message: message.into(),
    }
}

fn unique(section: &str, names: &[&str]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if n.trim().is_empty() {
            return Err(syntax(section, "empty name"));
        }
        if !seen.insert(*n) {
            return Err(syntax(section, format!("duplicate name {n:?}")));
        }
    }
    Ok(())
}

fn build_scale(spec: &ScaleSpec) -> Result<LinguisticScale> {
    match (&spec.builtin, &spec.entries) {
        (Some(_), Some(_)) => Err(syntax("scale", "give either `builtin` or `entries`, not both")),
        (Some(name), None) if name == BUILTIN_NAME => Ok(LinguisticScale::builtin()),
        (Some(name), None) => Err(syntax("scale", format!("unknown builtin scale {name:?}"))),
        (None, None) => Ok(LinguisticScale::builtin()),
        (None, Some(entries)) => {
            let mut out = Vec::with_capacity(entries.len());
            for (label, &[a, b, c, d]) in entries {
                let v = Ivffn::new(a, b, c, d)
                    .map_err(|e| syntax(format!("scale.entries.{label}"), e.to_string()))?;
                out.push((label.as_str(), v));
            }
            LinguisticScale::new(out)
        }
    }
}

fn check_reference(subject: &str, v: &Option<Vec<f64>>, n: usize) -> Result<()> {
    match v {
        Some(w) if w.len() != n => Err(Error::ShapeMismatch(format!(
            "{subject} has {} entries for {n} criteria",
            w.len()
        ))),
        _ => Ok(()),
    }
}

/// Parses and validates a problem file. `strict_labels` disables label
/// repair even when the file asks for it.
pub fn parse_problem(text: &str, strict_labels: bool) -> Result<DecisionProblem> {
    let file: ProblemFile = toml::from_str(text).map_err(|e| syntax("problem file", e.to_string().trim_end()))?;
    let mode = if file.meta.label_repair && !strict_labels {
        LabelMode::Repair
    } else {
        LabelMode::Strict
    };
    let scale = build_scale(&file.scale)?;

    let alts = &file.alternatives.names;
    unique("alternatives", &alts.iter().map(String::as_str).collect::<Vec<_>>())?;
    unique("criteria", &file.criteria.iter().map(|c| c.name.as_str()).collect::<Vec<_>>())?;
    unique("dms", &file.dms.iter().map(|d| d.name.as_str()).collect::<Vec<_>>())?;
    let (m, n) = (alts.len(), file.criteria.len());
    if m == 0 || n == 0 || file.dms.is_empty() {
        return Err(Error::EmptyProblem);
    }

    if let Some(extra) = file.matrices.keys().find(|k| !file.dms.iter().any(|d| &d.name == *k)) {
        return Err(syntax(
            format!("matrices.{extra}"),
            "no decision maker with this name",
        ));
    }

    let mut warnings = Vec::new();
    let mut matrices = Vec::with_capacity(file.dms.len());
    for dm in &file.dms {
        check_reference(&format!("reference weights of {}", dm.name), &dm.reference_weights, n)?;
        let rows = file
            .matrices
            .get(&dm.name)
            .ok_or_else(|| syntax("matrices", format!("missing matrix for {}", dm.name)))?;
        if rows.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix {} has {} rows for {n} criteria",
                dm.name,
                rows.len()
            )));
        }
        let mut cells = vec![Vec::with_capacity(n); m];
        for (j, row) in rows.iter().enumerate() {
            let crit = &file.criteria[j].name;
            if row.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {} row {crit} has {} cells for {m} alternatives",
                    dm.name,
                    row.len()
                )));
            }
            for (i, cell) in row.iter().enumerate() {
                let at = format!("matrices.{} row {crit} column {}", dm.name, alts[i]);
                let value = match cell {
                    Cell::Label(token) => {
                        let r = scale.lookup(token, mode).map_err(|e| match e {
                            Error::UnknownLabel { token, .. } => Error::UnknownLabel {
                                token,
                                location: Some(at.clone()),
                            },
                            other => other,
                        })?;
                        if let Some(fixed) = r.repaired_to {
                            warnings.push(format!("{at}: label {token:?} read as {fixed}"));
                        }
                        r.value
                    }
                    Cell::Grades([a, b, c, d]) => {
                        Ivffn::new(*a, *b, *c, *d).map_err(|e| syntax(at.clone(), e.to_string()))?
                    }
                };
                if value.is_degenerate() {
                    warnings.push(format!("{at}: degenerate value with zero membership and non-membership"));
                }
                cells[i].push(value);
            }
        }
        matrices.push(DecisionMatrix::new(dm.name.clone(), cells)?);
    }
    check_reference("reference group weights", &file.reference.group_weights, n)?;

    let criteria = file
        .criteria
        .into_iter()
        .map(|c| Criterion {
            name: c.name,
            kind: c.kind,
        })
        .collect();
    let dms = file
        .dms
        .into_iter()
        .map(|d| DecisionMaker {
            name: d.name,
            influence: d.lambda,
            reference_weights: d.reference_weights,
        })
        .collect();
    Ok(
        DecisionProblem::new(file.meta.name, file.alternatives.names, criteria, dms, matrices)?
            .with_reference_group_weights(file.reference.group_weights)
            .with_warnings(warnings),
    )
}

/// Reads a problem from disk, or the bundled case study when `source` is
/// `case_study` and no such file exists.
pub fn load_problem(source: &str, strict_labels: bool) -> Result<DecisionProblem> {
    if source == CASE_STUDY_NAME && !Path::new(source).exists() {
        return parse_problem(CASE_STUDY_TOML, strict_labels);
    }
    let text = std::fs::read_to_string(source)?;
    parse_problem(&text, strict_labels)
}

/// The bundled case study with label repair enabled.
pub fn case_study() -> DecisionProblem {
    parse_problem(CASE_STUDY_TOML, false).expect("bundled case study parses")
}
