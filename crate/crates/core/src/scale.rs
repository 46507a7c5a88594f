//! Linguistic judgment scales.

use crate::error::{Error, Result};
use crate::ivff::Ivffn;

/// Name under which problem files refer to [`LinguisticScale::builtin`].
pub const BUILTIN_NAME: &str = "ivff-9";

const BUILTIN_ROWS: [(&str, [f64; 4]); 9] = [
    ("CH", [0.95, 1.0, 0.0, 0.0]),
    ("VH", [0.8, 0.9, 0.1, 0.2]),
    ("H", [0.7, 0.8, 0.2, 0.3]),
    ("SM", [0.6, 0.65, 0.35, 0.4]),
    ("E", [0.5, 0.5, 0.5, 0.5]),
    ("SL", [0.35, 0.4, 0.6, 0.65]),
    ("L", [0.2, 0.3, 0.7, 0.8]),
    ("VL", [0.1, 0.2, 0.8, 0.9]),
    ("CL", [0.0, 0.0, 0.95, 1.0]),
];

/// How label lookups treat tokens that are not in the scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LabelMode {
    #[default]
    Strict,
    /// Strip trailing digits from an unknown token and retry once.
    Repair,
}

/// Result of a successful lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub value: Ivffn,
    /// Set when the token only matched after repair.
    pub repaired_to: Option<String>,
}

/// Ordered map from label to value. Labels are stored uppercased and are
/// matched case-insensitively after trimming.
#[derive(Clone, Debug, PartialEq)]
pub struct LinguisticScale {
    entries: Vec<(String, Ivffn)>,
}

fn normalize(label: &str) -> String {
    label.trim().to_uppercase()
}

impl LinguisticScale {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Ivffn)>,
        S: AsRef<str>,
    {
        let mut out: Vec<(String, Ivffn)> = Vec::new();
        for (label, value) in entries {
            let key = normalize(label.as_ref());
            if key.is_empty() {
                return Err(Error::Syntax {
                    context: "scale".into(),
                    message: "empty label".into(),
                });
            }
            if out.iter().any(|(k, _)| *k == key) {
                return Err(Error::Syntax {
                    context: "scale".into(),
                    message: format!("duplicate label {key:?}"),
                });
            }
            out.push((key, value));
        }
        Ok(LinguisticScale { entries: out })
    }

    /// The nine-point scale CH, VH, H, SM, E, SL, L, VL, CL.
    pub fn builtin() -> Self {
        LinguisticScale {
            entries: BUILTIN_ROWS
                .iter()
                .map(|(label, [a, b, c, d])| {
                    let v = Ivffn::new(*a, *b, *c, *d).expect("builtin scale row is valid");
                    (label.to_string(), v)
                })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(String, Ivffn)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn get(&self, key: &str) -> Option<Ivffn> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn lookup(&self, label: &str, mode: LabelMode) -> Result<Resolved> {
        let key = normalize(label);
        if let Some(value) = self.get(&key) {
            return Ok(Resolved {
                value,
                repaired_to: None,
            });
        }
        if mode == LabelMode::Repair {
            let stripped = key.trim_end_matches(|c: char| c.is_ascii_digit());
            if stripped.len() < key.len() && !stripped.is_empty() {
                if let Some(value) = self.get(stripped) {
                    return Ok(Resolved {
                        value,
                        repaired_to: Some(stripped.to_string()),
                    });
                }
            }
        }
        Err(Error::UnknownLabel {
            token: label.to_string(),
            location: None,
        })
    }
}
