//! Evaluation configuration: which stopping model, which satisfaction model,
//! and how to treat grades and unjudged documents.

use serde::{Deserialize, Serialize};

use crate::errors::{Error, Result};
use crate::metric::{expected_satisfaction, HazardSchedule, MetricScore, SatisfactionSchedule};
use crate::ranking::JudgedRanking;
use crate::satisfaction::{
    gain_satisfaction, navigational_satisfaction, precision_satisfaction, GainMap,
};
use crate::stopping::{ap_hazards, check_persistence, rbp_hazards, we_hazards, WeParams};

/// How the per-rank stopping hazards are derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingModel {
    /// The AP user: stops only at relevant documents, hazard inversely
    /// proportional to the relevant documents still to come.
    Ap,
    /// The RBP user: constant hazard `1 - persistence`.
    Rbp { persistence: f64 },
    /// The willingness/expectation user.
    We(WeParams),
}

impl StoppingModel {
    fn label(&self) -> &'static str {
        match self {
            StoppingModel::Ap => "ap",
            StoppingModel::Rbp { .. } => "rbp",
            StoppingModel::We(_) => "we",
        }
    }
}

/// What the user takes away when they stop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SatisfactionModel {
    /// Precision at the stopping rank (informational intent).
    Precision,
    /// Gain of the stopped-at document.
    Gain(GainMap),
    /// Step function at the first relevant document (navigational intent).
    Navigational,
}

impl SatisfactionModel {
    fn label(&self) -> &'static str {
        match self {
            SatisfactionModel::Precision => "precision",
            SatisfactionModel::Gain(_) => "gain",
            SatisfactionModel::Navigational => "navigational",
        }
    }
}

/// Treatment of retrieved documents missing from the qrels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnjudgedPolicy {
    /// Assume unjudged documents are not relevant (the pooling convention).
    Nonrelevant,
    /// Drop unjudged documents before ranks are assigned.
    Exclude,
    /// Abort the evaluation on the first unjudged document.
    Error,
}

/// A full evaluation configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub stopping: StoppingModel,
    pub satisfaction: SatisfactionModel,
    /// Grades at or above this count as relevant; at least 1.
    pub binarization_threshold: u32,
    pub unjudged: UnjudgedPolicy,
    /// Optional rank cutoff applied when rankings are joined.
    pub max_depth: Option<usize>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            stopping: StoppingModel::Ap,
            satisfaction: SatisfactionModel::Precision,
            binarization_threshold: 1,
            unjudged: UnjudgedPolicy::Nonrelevant,
            max_depth: None,
        }
    }
}

impl MetricConfig {
    /// Checks every parameter against the range its model demands.
    pub fn validate(&self) -> Result<()> {
        match &self.stopping {
            StoppingModel::Ap => {}
            StoppingModel::Rbp { persistence } => check_persistence(*persistence)?,
            StoppingModel::We(params) => params.validate()?,
        }
        // Rebuild gain tables to re-run their checks; serde can smuggle in
        // an unvalidated map.
        if let SatisfactionModel::Gain(GainMap::Table(map)) = &self.satisfaction {
            GainMap::table(map.iter().map(|(&g, &v)| (g, v)))?;
        }
        if self.binarization_threshold == 0 {
            return Err(Error::InvalidParameter {
                name: "binarization_threshold",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// A compact name for report rows, e.g. `ap-precision` or `rbp-gain`.
    pub fn metric_name(&self) -> String {
        format!("{}-{}", self.stopping.label(), self.satisfaction.label())
    }

    /// Hazard schedule for one ranking under the configured stopping model.
    pub fn hazards_for(&self, ranking: &JudgedRanking) -> Result<HazardSchedule> {
        match &self.stopping {
            StoppingModel::Ap => ap_hazards(ranking),
            StoppingModel::Rbp { persistence } => rbp_hazards(ranking.len(), *persistence),
            StoppingModel::We(params) => we_hazards(ranking, params),
        }
    }

    /// Satisfaction schedule for one ranking under the configured model.
    pub fn satisfaction_for(&self, ranking: &JudgedRanking) -> Result<SatisfactionSchedule> {
        match &self.satisfaction {
            SatisfactionModel::Precision => Ok(precision_satisfaction(ranking)),
            SatisfactionModel::Gain(gains) => gain_satisfaction(ranking, gains),
            SatisfactionModel::Navigational => Ok(navigational_satisfaction(ranking)),
        }
    }

    /// Scores one ranking end to end.
    pub fn evaluate_ranking(&self, ranking: &JudgedRanking) -> Result<MetricScore> {
        let hazards = self.hazards_for(ranking)?;
        let sats = self.satisfaction_for(ranking)?;
        expected_satisfaction(&hazards, &sats)
    }
}
