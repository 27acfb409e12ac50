//! Textbook reference implementations of AP and RBP.
//!
//! These share no evaluation code with the hazard/satisfaction pipeline, so
//! equivalence tests between the two routes actually mean something.

use crate::errors::{Error, Result};
use crate::ranking::JudgedRanking;
use crate::satisfaction::GainMap;
use crate::stopping::check_persistence;

/// Average precision: the mean of precision at relevant ranks, divided by
/// the pool-relevant count. Relevant documents never retrieved contribute
/// zero. Undefined when the pool holds no relevant documents.
pub fn average_precision(ranking: &JudgedRanking) -> Result<f64> {
    let total = ranking.total_relevant();
    if total == 0 {
        return Err(Error::UndefinedMetric {
            topic_id: ranking.topic_id().to_string(),
            reason: "average precision needs at least one relevant document in the pool".into(),
        });
    }
    let mut relevant_seen = 0usize;
    let mut sum = 0.0;
    for (i, relevant) in ranking.relevance_flags().enumerate() {
        if relevant {
            relevant_seen += 1;
            sum += relevant_seen as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / total as f64)
}

/// A rank-biased precision value plus the unscored tail mass `p^n` that the
/// geometric weights leave past the evaluated depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbpScore {
    pub value: f64,
    pub residual_uncertainty: f64,
}

/// Rank-biased precision: `(1 - p) * sum_k p^(k-1) * g_k` with the gains
/// taken from the map. Persistence must lie in `[0, 1)`.
pub fn rbp_direct(ranking: &JudgedRanking, persistence: f64, gains: &GainMap) -> Result<RbpScore> {
    check_persistence(persistence)?;
    let mut weight = 1.0 - persistence;
    let mut value = 0.0;
    for &grade in ranking.grades() {
        value += weight * gains.gain(grade)?;
        weight *= persistence;
    }
    Ok(RbpScore {
        value,
        residual_uncertainty: persistence.powi(ranking.len() as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranking(grades: &[u32], total_relevant: usize) -> JudgedRanking {
        JudgedRanking::new("t", grades.iter().copied(), total_relevant, 1).unwrap()
    }

    #[test]
    fn ap_direct_formula() {
        let ap = average_precision(&ranking(&[1, 0, 1], 2)).unwrap();
        assert!((ap - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn ap_perfect_single_document() {
        assert_eq!(average_precision(&ranking(&[1], 1)).unwrap(), 1.0);
    }

    #[test]
    fn ap_unretrieved_relevant_contributes_zero() {
        // One of the two pool-relevant documents was never retrieved.
        let ap = average_precision(&ranking(&[0, 1], 2)).unwrap();
        assert!((ap - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ap_undefined_with_empty_pool() {
        assert!(matches!(
            average_precision(&ranking(&[0, 0], 0)).unwrap_err(),
            Error::UndefinedMetric { .. }
        ));
    }

    #[test]
    fn rbp_geometric_expansion() {
        let gains = GainMap::binary(1).unwrap();
        let s = rbp_direct(&ranking(&[1, 0, 1], 2), 0.5, &gains).unwrap();
        assert_eq!(s.value, 0.625);
        assert_eq!(s.residual_uncertainty, 0.125);
    }

    #[test]
    fn rbp_empty_ranking_is_all_uncertainty() {
        let gains = GainMap::binary(1).unwrap();
        let s = rbp_direct(&ranking(&[], 1), 0.5, &gains).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.residual_uncertainty, 1.0);
    }

    #[test]
    fn rbp_zero_persistence_scores_rank_one_only() {
        let gains = GainMap::binary(1).unwrap();
        let s = rbp_direct(&ranking(&[1], 1), 0.0, &gains).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.residual_uncertainty, 0.0);
    }

    #[test]
    fn rbp_rejects_unit_persistence() {
        let gains = GainMap::binary(1).unwrap();
        assert!(rbp_direct(&ranking(&[1], 1), 1.0, &gains).is_err());
    }
}
