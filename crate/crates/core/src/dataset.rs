//! Parsing, validation and partitioning of the two-column observation table.
//!
//! The input is plain text with one research group per line: an indicator
//! score and an ordinal quality score. Fields are separated by whitespace, a
//! single tab or a single comma. A leading header line is skipped when it
//! contains any non-numeric token. Blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinal peer-review score on the 1–5 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Quality(u8);

impl Quality {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 5;

    pub const fn new(score: u8) -> Option<Self> {
        if score >= Self::MIN && score <= Self::MAX {
            Some(Quality(score))
        } else {
            None
        }
    }

    /// Accepts integral reals in range, e.g. `4.0`.
    pub fn from_f64(value: f64) -> Option<Self> {
        if value.fract() != 0.0 || !(1.0..=5.0).contains(&value) {
            return None;
        }
        Self::new(value as u8)
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One research group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observation {
    pub indicator: f64,
    pub quality: Quality,
}

impl Observation {
    pub fn new(indicator: f64, quality: Quality) -> Result<Self> {
        if !(indicator.is_finite() && indicator > 0.0) {
            return Err(Error::NonpositiveIndicator {
                line: 0,
                value: indicator,
            });
        }
        Ok(Observation { indicator, quality })
    }
}

/// A validated, non-empty, ordered collection of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
    source_label: String,
    notices: Vec<String>,
}

impl Dataset {
    pub fn new(observations: Vec<Observation>, source_label: impl Into<String>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, obs) in observations.iter().enumerate() {
            if !(obs.indicator.is_finite() && obs.indicator > 0.0) {
                return Err(Error::NonpositiveIndicator {
                    line: i + 1,
                    value: obs.indicator,
                });
            }
        }
        Ok(Dataset {
            observations,
            source_label: source_label.into(),
            notices: Vec::new(),
        })
    }

    /// Convenience constructor from `(indicator, quality)` pairs.
    pub fn from_pairs(pairs: &[(f64, u8)]) -> Result<Self> {
        let observations = pairs
            .iter()
            .enumerate()
            .map(|(i, &(indicator, q))| {
                let quality = Quality::new(q).ok_or(Error::QualityOutOfRange {
                    line: i + 1,
                    value: f64::from(q),
                })?;
                Observation::new(indicator, quality).map_err(|_| Error::NonpositiveIndicator {
                    line: i + 1,
                    value: indicator,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(observations, "<memory>")
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    /// Informational messages produced while parsing (e.g. column swap).
    pub fn notices(&self) -> &[String] {
        &self.notices
    }

    pub fn indicators(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.indicator).collect()
    }

    pub fn qualities(&self) -> Vec<f64> {
        self.observations
            .iter()
            .map(|o| f64::from(o.quality.get()))
            .collect()
    }

    /// Serializes to the two-column `indicator quality` text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for obs in &self.observations {
            out.push_str(&format!("{} {}\n", obs.indicator, obs.quality));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ColumnOrder {
    /// Indicator first unless exactly one column looks like quality scores.
    #[default]
    Auto,
    IndicatorFirst,
    QualityFirst,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    pub columns: ColumnOrder,
    pub source_label: Option<String>,
}

fn is_numeric(token: &str) -> bool {
    token.parse::<f64>().map(f64::is_finite).unwrap_or(false)
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(|f| f.trim_matches(' ')).collect()
    } else {
        line.split_whitespace().collect()
    }
}

struct RawRow {
    line: usize,
    first: f64,
    second: f64,
}

fn looks_like_quality(values: impl Iterator<Item = f64>) -> bool {
    let mut values = values.peekable();
    values.peek().is_some() && values.all(|v| Quality::from_f64(v).is_some())
}

/// Parses the observation table. See the module docs for the accepted format.
pub fn parse_dataset(text: &str, options: &ParseOptions) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut seen_first = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line);
        if !seen_first {
            seen_first = true;
            if fields.iter().any(|f| !f.is_empty() && !is_numeric(f)) {
                continue;
            }
        }
        if fields.len() != 2 {
            return Err(Error::MalformedLine {
                line: line_no,
                reason: format!("expected 2 columns, found {}", fields.len()),
            });
        }
        let mut parsed = [0.0; 2];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::MalformedLine {
                    line: line_no,
                    reason: format!("non-numeric token {field:?}"),
                })?;
        }
        rows.push(RawRow {
            line: line_no,
            first: parsed[0],
            second: parsed[1],
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut notices = Vec::new();
    let quality_first = match options.columns {
        ColumnOrder::IndicatorFirst => false,
        ColumnOrder::QualityFirst => true,
        ColumnOrder::Auto => {
            let first_q = looks_like_quality(rows.iter().map(|r| r.first));
            let second_q = looks_like_quality(rows.iter().map(|r| r.second));
            if first_q && !second_q {
                notices.push(
                    "first column holds only integers in 1-5; reading it as the quality score"
                        .to_string(),
                );
                true
            } else {
                false
            }
        }
    };

    let mut observations = Vec::with_capacity(rows.len());
    for row in &rows {
        let (indicator, quality) = if quality_first {
            (row.second, row.first)
        } else {
            (row.first, row.second)
        };
        let quality = Quality::from_f64(quality).ok_or(Error::QualityOutOfRange {
            line: row.line,
            value: quality,
        })?;
        if indicator <= 0.0 {
            return Err(Error::NonpositiveIndicator {
                line: row.line,
                value: indicator,
            });
        }
        observations.push(Observation { indicator, quality });
    }

    let label = options
        .source_label
        .clone()
        .unwrap_or_else(|| "<input>".to_string());
    let mut dataset = Dataset::new(observations, label)?;
    dataset.notices = notices;
    Ok(dataset)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub total: usize,
    pub counts_by_quality: BTreeMap<Quality, usize>,
    pub min_indicator: f64,
    pub max_indicator: f64,
}

pub fn validate_dataset(d: &Dataset) -> ValidationReport {
    let mut counts_by_quality = BTreeMap::new();
    let mut min_indicator = f64::INFINITY;
    let mut max_indicator = f64::NEG_INFINITY;
    for obs in d.observations() {
        *counts_by_quality.entry(obs.quality).or_insert(0) += 1;
        min_indicator = min_indicator.min(obs.indicator);
        max_indicator = max_indicator.max(obs.indicator);
    }
    ValidationReport {
        total: d.len(),
        counts_by_quality,
        min_indicator,
        max_indicator,
    }
}

/// Splits indicator values by quality score, keeping dataset order within each group.
pub fn partition_by_quality(d: &Dataset) -> BTreeMap<Quality, Vec<f64>> {
    let mut groups: BTreeMap<Quality, Vec<f64>> = BTreeMap::new();
    for obs in d.observations() {
        groups.entry(obs.quality).or_default().push(obs.indicator);
    }
    groups
}
