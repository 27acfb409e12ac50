//! Per-topic evaluation reports and their tab-separated serialization.
//!
//! Rows are `topic<TAB>metric<TAB>score<TAB>residual`, followed by an `all`
//! aggregate row holding the unweighted mean over defined topics. Topics
//! where the metric is undefined (for instance AP with no relevant
//! documents) print `undefined` in the score and residual columns and are
//! excluded from the mean.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::MetricConfig;
use crate::errors::{Error, Result};
use crate::ranking::JudgedRanking;

/// The result of scoring one topic.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicOutcome {
    Scored { score: f64, residual: f64 },
    Undefined { reason: String },
}

/// One report row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicRow {
    pub topic_id: String,
    #[serde(flatten)]
    pub outcome: TopicOutcome,
}

/// A full evaluation: one row per topic plus the configuration that
/// produced it. Reports re-read from disk carry no configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub metric: String,
    pub config: Option<MetricConfig>,
    pub rows: Vec<TopicRow>,
}

/// Renders a score with 12 significant digits, trailing zeros trimmed.
///
/// Twelve digits are the serialization contract: any such decimal maps to a
/// unique `f64` and back, so re-parsing a report and re-serializing it
/// reproduces the bytes.
pub fn format_score(value: f64) -> String {
    debug_assert!(value.is_finite());
    if value == 0.0 {
        return "0".to_owned();
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

impl EvaluationReport {
    /// Scores every ranking under one configuration. Topics where the metric
    /// is undefined become flagged rows; any other failure aborts. Rankings
    /// are scored in parallel but rows keep the input order.
    pub fn evaluate(cfg: &MetricConfig, rankings: &[JudgedRanking]) -> Result<EvaluationReport> {
        cfg.validate()?;
        let rows: Vec<TopicRow> = rankings
            .par_iter()
            .map(|ranking| {
                let outcome = match cfg.evaluate_ranking(ranking) {
                    Ok(score) => TopicOutcome::Scored {
                        score: score.expected_satisfaction,
                        residual: score.residual,
                    },
                    Err(Error::UndefinedMetric { reason, .. }) => {
                        TopicOutcome::Undefined { reason }
                    }
                    Err(other) => return Err(other),
                };
                Ok(TopicRow {
                    topic_id: ranking.topic_id().to_owned(),
                    outcome,
                })
            })
            .collect::<Result<_>>()?;
        Ok(EvaluationReport {
            metric: cfg.metric_name(),
            config: Some(cfg.clone()),
            rows,
        })
    }

    /// Number of topics the metric was defined on.
    pub fn defined_count(&self) -> usize {
        self.scored_values().count()
    }

    /// Unweighted mean score over defined topics; `None` when every topic
    /// was undefined.
    pub fn mean_score(&self) -> Option<f64> {
        self.mean_of(|score, _| score)
    }

    /// Unweighted mean residual over defined topics.
    pub fn mean_residual(&self) -> Option<f64> {
        self.mean_of(|_, residual| residual)
    }

    fn scored_values(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows.iter().filter_map(|row| match row.outcome {
            TopicOutcome::Scored { score, residual } => Some((score, residual)),
            TopicOutcome::Undefined { .. } => None,
        })
    }

    fn mean_of(&self, pick: impl Fn(f64, f64) -> f64) -> Option<f64> {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (score, residual) in self.scored_values() {
            sum += pick(score, residual);
            count += 1;
        }
        (count > 0).then(|| sum / count as f64)
    }

    /// Serializes to the tab-separated row format.
    ///
    /// The `all` row averages the per-topic values exactly as printed, so
    /// the file is self-consistent and serialization is idempotent under
    /// [`parse_tsv`].
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut printed: Vec<(f64, f64)> = Vec::new();
        for row in &self.rows {
            match &row.outcome {
                TopicOutcome::Scored { score, residual } => {
                    let score_s = format_score(*score);
                    let residual_s = format_score(*residual);
                    printed.push((
                        score_s.parse().expect("format_score emits valid decimals"),
                        residual_s
                            .parse()
                            .expect("format_score emits valid decimals"),
                    ));
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\n",
                        row.topic_id, self.metric, score_s, residual_s
                    ));
                }
                TopicOutcome::Undefined { .. } => {
                    out.push_str(&format!(
                        "{}\t{}\tundefined\tundefined\n",
                        row.topic_id, self.metric
                    ));
                }
            }
        }
        if printed.is_empty() {
            out.push_str(&format!("all\t{}\tundefined\tundefined\n", self.metric));
        } else {
            let n = printed.len() as f64;
            let mean_score: f64 = printed.iter().map(|(s, _)| s).sum::<f64>() / n;
            let mean_residual: f64 = printed.iter().map(|(_, r)| r).sum::<f64>() / n;
            out.push_str(&format!(
                "all\t{}\t{}\t{}\n",
                self.metric,
                format_score(mean_score),
                format_score(mean_residual)
            ));
        }
        out
    }

    /// Structured rendering with the config echo and full-precision scores.
    pub fn to_json(&self) -> String {
        let topics: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| match &row.outcome {
                TopicOutcome::Scored { score, residual } => json!({
                    "topic_id": row.topic_id,
                    "score": score,
                    "residual": residual,
                }),
                TopicOutcome::Undefined { reason } => json!({
                    "topic_id": row.topic_id,
                    "undefined": reason,
                }),
            })
            .collect();
        let report = json!({
            "metric": self.metric,
            "config": self.config,
            "topics": topics,
            "aggregate": {
                "score": self.mean_score(),
                "residual": self.mean_residual(),
                "defined_topics": self.defined_count(),
                "total_topics": self.rows.len(),
            },
        });
        serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
    }
}

/// Reads a report back from its tab-separated form. The `all` row is
/// validated for shape and dropped; it is recomputed on serialization.
pub fn parse_tsv(text: &str) -> Result<EvaluationReport> {
    let mut metric: Option<String> = None;
    let mut rows = Vec::new();
    let mut saw_aggregate = false;
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        if saw_aggregate {
            return Err(Error::MalformedReport(format!(
                "line {}: rows after the `all` aggregate",
                idx + 1
            )));
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::MalformedReport(format!(
                "line {}: expected 4 tab-separated fields, found {}",
                idx + 1,
                fields.len()
            )));
        }
        match &metric {
            None => metric = Some(fields[1].to_owned()),
            Some(m) if m != fields[1] => {
                return Err(Error::MalformedReport(format!(
                    "line {}: metric `{}` conflicts with `{m}`",
                    idx + 1,
                    fields[1]
                )));
            }
            Some(_) => {}
        }
        if fields[0] == "all" {
            saw_aggregate = true;
            continue;
        }
        let outcome = if fields[2] == "undefined" {
            TopicOutcome::Undefined {
                reason: String::new(),
            }
        } else {
            let score = parse_unit_value(fields[2], idx + 1, "score")?;
            let residual = parse_unit_value(fields[3], idx + 1, "residual")?;
            TopicOutcome::Scored { score, residual }
        };
        rows.push(TopicRow {
            topic_id: fields[0].to_owned(),
            outcome,
        });
    }
    let metric = metric.ok_or_else(|| Error::MalformedReport("empty report".to_owned()))?;
    if !saw_aggregate {
        return Err(Error::MalformedReport(
            "missing `all` aggregate row".to_owned(),
        ));
    }
    Ok(EvaluationReport {
        metric,
        config: None,
        rows,
    })
}

fn parse_unit_value(field: &str, line: usize, what: &str) -> Result<f64> {
    let value: f64 = field.parse().map_err(|_| {
        Error::MalformedReport(format!("line {line}: {what} `{field}` is not a number"))
    })?;
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::MalformedReport(format!(
            "line {line}: {what} `{field}` is outside [0, 1]"
        )));
    }
    Ok(value)
}
