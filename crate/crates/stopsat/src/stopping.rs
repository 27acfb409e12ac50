//! Stopping models: hazard schedules derived from a judged ranking.
//!
//! Three models are provided. The AP model stops only at relevant documents,
//! with probability inversely proportional to the number of relevant
//! documents at or after the current rank; combined with precision-at-stop
//! satisfaction it reproduces average precision exactly. The RBP model stops
//! with a constant hazard, the complement of the persistence parameter. The
//! willingness/expectation model makes the hazard grow as the user's smoothed
//! precision estimate decays and as the perceived fraction of relevant
//! documents still to come shrinks.

use serde::{Deserialize, Serialize};

use crate::errors::{Error, Result};
use crate::metric::HazardSchedule;
use crate::ranking::JudgedRanking;

/// Parameters of the willingness/expectation stopping model.
///
/// The model tracks two per-rank factors, both evaluated before the document
/// at the current rank is observed:
///
/// * willingness `W_k`: the fraction of pool-relevant documents not yet seen,
///   `Rem(k) / total_relevant`;
/// * expectation `E_k`: exponentially smoothed precision, seeded with
///   `expectation_prior` and updated as
///   `E_{k+1} = alpha * rel_k + (1 - alpha) * E_k`.
///
/// The hazard is
///
/// ```text
/// p_k = min(1, base_hazard * ((1 - E_k)^delta + (1 - W_k)^gamma) / 2)
/// ```
///
/// which is non-decreasing as either factor drops and collapses to the
/// constant `base_hazard` when both exponents are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeParams {
    /// Scale of the hazard, in `(0, 1]`.
    pub base_hazard: f64,
    /// Smoothing rate `alpha` for the precision estimate, in `(0, 1]`.
    pub expectation_smoothing: f64,
    /// Initial smoothed precision `E_1`, in `[0, 1]`.
    pub expectation_prior: f64,
    /// Exponent `gamma` on the spent-willingness term, `>= 0`.
    pub willingness_exponent: f64,
    /// Exponent `delta` on the disappointed-expectation term, `>= 0`.
    pub expectation_exponent: f64,
}

impl WeParams {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool); 5] = [
            (
                "base_hazard",
                self.base_hazard,
                self.base_hazard.is_finite() && self.base_hazard > 0.0 && self.base_hazard <= 1.0,
            ),
            (
                "expectation_smoothing",
                self.expectation_smoothing,
                self.expectation_smoothing.is_finite()
                    && self.expectation_smoothing > 0.0
                    && self.expectation_smoothing <= 1.0,
            ),
            (
                "expectation_prior",
                self.expectation_prior,
                self.expectation_prior.is_finite() && (0.0..=1.0).contains(&self.expectation_prior),
            ),
            (
                "willingness_exponent",
                self.willingness_exponent,
                self.willingness_exponent.is_finite() && self.willingness_exponent >= 0.0,
            ),
            (
                "expectation_exponent",
                self.expectation_exponent,
                self.expectation_exponent.is_finite() && self.expectation_exponent >= 0.0,
            ),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{value} is outside the allowed range"),
                });
            }
        }
        Ok(())
    }

    /// The pointwise hazard for a willingness/expectation pair, both in
    /// `[0, 1]`. Exposed so the monotonicity laws can be checked on grids.
    pub fn hazard(&self, willingness: f64, expectation: f64) -> f64 {
        let disappointment = (1.0 - expectation).powf(self.expectation_exponent);
        let impatience = (1.0 - willingness).powf(self.willingness_exponent);
        (self.base_hazard * ((disappointment + impatience) / 2.0)).min(1.0)
    }
}

/// Hazards reproducing average precision: continue past non-relevant
/// documents, and at a relevant one stop with probability `1 / Rem(k)` where
/// `Rem(k)` counts pool-relevant documents at or after rank `k` (unretrieved
/// ones count as lying beyond the end).
///
/// Undefined when the topic has no relevant documents.
pub fn ap_hazards(ranking: &JudgedRanking) -> Result<HazardSchedule> {
    ensure_some_relevant(ranking, "AP stopping model")?;
    let mut remaining = ranking.total_relevant();
    let mut hazards = Vec::with_capacity(ranking.len());
    for relevant in ranking.relevance_flags() {
        if relevant {
            // remaining >= 1 here: the pool covers every retrieved relevant.
            hazards.push(1.0 / remaining as f64);
            remaining -= 1;
        } else {
            hazards.push(0.0);
        }
    }
    HazardSchedule::new(hazards)
}

/// Constant-hazard schedule of RBP: `p_k = 1 - persistence` at every rank.
///
/// Persistence must lie in `[0, 1)`; at 1 the user would never stop.
pub fn rbp_hazards(len: usize, persistence: f64) -> Result<HazardSchedule> {
    check_persistence(persistence)?;
    HazardSchedule::new(vec![1.0 - persistence; len])
}

/// Hazards of the willingness/expectation model. See [`WeParams`] for the
/// functional form. The expectation factor uses only documents before the
/// current rank, so each hazard is a function of the observed prefix.
pub fn we_hazards(ranking: &JudgedRanking, params: &WeParams) -> Result<HazardSchedule> {
    params.validate()?;
    ensure_some_relevant(ranking, "willingness/expectation stopping model")?;
    let total = ranking.total_relevant() as f64;
    let mut remaining = ranking.total_relevant();
    let mut expectation = params.expectation_prior;
    let mut hazards = Vec::with_capacity(ranking.len());
    for relevant in ranking.relevance_flags() {
        let willingness = remaining as f64 / total;
        hazards.push(params.hazard(willingness, expectation));
        let rel = if relevant { 1.0 } else { 0.0 };
        expectation =
            params.expectation_smoothing * rel + (1.0 - params.expectation_smoothing) * expectation;
        if relevant {
            remaining -= 1;
        }
    }
    HazardSchedule::new(hazards)
}

pub(crate) fn check_persistence(persistence: f64) -> Result<()> {
    if !persistence.is_finite() || !(0.0..1.0).contains(&persistence) {
        return Err(Error::InvalidParameter {
            name: "persistence",
            reason: format!("{persistence} is outside [0, 1)"),
        });
    }
    Ok(())
}

fn ensure_some_relevant(ranking: &JudgedRanking, model: &str) -> Result<()> {
    if ranking.total_relevant() == 0 {
        return Err(Error::UndefinedMetric {
            topic_id: ranking.topic_id().to_string(),
            reason: format!("{model} needs at least one relevant document in the pool"),
        });
    }
    Ok(())
}
