//! The core evaluator: expected satisfaction over a stopping process.
//!
//! A browsing user walks a ranked list top to bottom. At rank `k` they stop
//! with the conditional probability `p_k` (the *hazard*) and, having stopped
//! there, realize an expected satisfaction `s_k`. The unconditional chance of
//! stopping exactly at rank `k` is the prefix product
//!
//! ```text
//! w_k = (1 - p_1) * ... * (1 - p_{k-1}) * p_k
//! ```
//!
//! and the metric is `E[S] = sum_k w_k * s_k`. Rankings are finite, so the
//! sum truncates at the last rank; the leftover probability of never stopping
//! (the *residual*) contributes zero satisfaction and is reported alongside
//! the score so callers can tell a dissatisfied user from one who never
//! stopped.

use crate::errors::{Error, Result};
use crate::MAX_RANKING_DEPTH;

/// Per-rank conditional stopping probabilities `p_1..p_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardSchedule {
    hazards: Vec<f64>,
}

impl HazardSchedule {
    /// Validates that every hazard lies in `[0, 1]`.
    pub fn new(hazards: Vec<f64>) -> Result<Self> {
        if hazards.len() > MAX_RANKING_DEPTH {
            return Err(Error::DepthExceeded {
                depth: hazards.len(),
                max: MAX_RANKING_DEPTH,
            });
        }
        for (i, &p) in hazards.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::HazardOutOfRange {
                    rank: i + 1,
                    value: p,
                });
            }
        }
        Ok(HazardSchedule { hazards })
    }

    pub fn values(&self) -> &[f64] {
        &self.hazards
    }

    pub fn len(&self) -> usize {
        self.hazards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hazards.is_empty()
    }
}

/// Per-rank expected satisfaction at stop, `s_1..s_n`, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SatisfactionSchedule {
    values: Vec<f64>,
}

impl SatisfactionSchedule {
    /// Validates that every value lies in `[0, 1]`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() > MAX_RANKING_DEPTH {
            return Err(Error::DepthExceeded {
                depth: values.len(),
                max: MAX_RANKING_DEPTH,
            });
        }
        for (i, &s) in values.iter().enumerate() {
            if !s.is_finite() || !(0.0..=1.0).contains(&s) {
                return Err(Error::SatisfactionOutOfRange {
                    rank: i + 1,
                    value: s,
                });
            }
        }
        Ok(SatisfactionSchedule { values })
    }

    /// Wraps values a caller has already proven to be in `[0, 1]`.
    pub(crate) fn from_checked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|s| (0.0..=1.0).contains(s)));
        debug_assert!(values.len() <= MAX_RANKING_DEPTH);
        SatisfactionSchedule { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Unconditional stop probabilities per rank plus the never-stop mass.
///
/// Invariant: `sum(weights) + residual == 1` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct StopWeights {
    weights: Vec<f64>,
    residual: f64,
}

impl StopWeights {
    /// The probability of stopping exactly at each rank.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The probability of exhausting the ranking without stopping.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// An evaluated metric value together with its never-stop mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricScore {
    /// Expected satisfaction in `[0, 1]`.
    pub expected_satisfaction: f64,
    /// Probability that the user never stopped within the ranking.
    pub residual: f64,
}

/// Decomposes hazards into unconditional stop weights.
///
/// `w_k` is the prefix survival product times `p_k`; the residual is the
/// survival mass left after the last rank.
pub fn stop_weights(hazards: &HazardSchedule) -> StopWeights {
    let mut weights = Vec::with_capacity(hazards.len());
    let mut survival = 1.0;
    for &p in hazards.values() {
        weights.push(survival * p);
        survival *= 1.0 - p;
    }
    StopWeights {
        weights,
        residual: survival,
    }
}

/// Evaluates expected satisfaction for aligned hazard and satisfaction
/// schedules.
///
/// The never-stop residual contributes zero satisfaction; it is returned in
/// the score rather than silently dropped.
pub fn expected_satisfaction(
    hazards: &HazardSchedule,
    sats: &SatisfactionSchedule,
) -> Result<MetricScore> {
    if hazards.len() != sats.len() {
        return Err(Error::ScheduleLengthMismatch {
            hazards: hazards.len(),
            satisfactions: sats.len(),
        });
    }
    let w = stop_weights(hazards);
    let score: f64 = w
        .weights()
        .iter()
        .zip(sats.values())
        .map(|(w, s)| w * s)
        .sum();
    Ok(MetricScore {
        expected_satisfaction: score,
        residual: w.residual(),
    })
}
