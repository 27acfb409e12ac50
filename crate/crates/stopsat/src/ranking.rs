//! Judged rankings: the per-topic input every model consumes.

use crate::errors::{Error, Result};
use crate::MAX_RANKING_DEPTH;

/// A relevance judgment grade. Zero means not relevant; higher grades mean
/// more relevant. Binary metrics binarize grades against a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelevanceGrade(u32);

impl RelevanceGrade {
    /// The raw grade value.
    pub fn value(self) -> u32 {
        self.0
    }

    /// Whether this grade counts as relevant at the given threshold.
    pub fn is_relevant(self, threshold: u32) -> bool {
        self.0 >= threshold
    }
}

impl From<u32> for RelevanceGrade {
    fn from(value: u32) -> Self {
        RelevanceGrade(value)
    }
}

/// A ranked list of judged documents for one topic, together with the total
/// number of relevant documents in the full judgment pool.
///
/// `total_relevant` counts every relevant document judged for the topic,
/// including ones the ranking never retrieved; stopping models that reason
/// about "relevant documents left" treat those as lying beyond the last rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgedRanking {
    topic_id: String,
    grades: Vec<RelevanceGrade>,
    total_relevant: usize,
    binarization_threshold: u32,
}

impl JudgedRanking {
    /// Builds a ranking from grades ordered by rank (rank 1 first).
    ///
    /// Fails if the threshold is zero, the ranking is deeper than
    /// [`MAX_RANKING_DEPTH`], or `total_relevant` is smaller than the number
    /// of relevant documents actually retrieved.
    pub fn new(
        topic_id: impl Into<String>,
        grades: impl IntoIterator<Item = u32>,
        total_relevant: usize,
        binarization_threshold: u32,
    ) -> Result<Self> {
        let topic_id = topic_id.into();
        let grades: Vec<RelevanceGrade> = grades.into_iter().map(RelevanceGrade).collect();
        if binarization_threshold == 0 {
            return Err(Error::InvalidRanking {
                topic_id,
                reason: "binarization threshold must be at least 1".into(),
            });
        }
        if grades.len() > MAX_RANKING_DEPTH {
            return Err(Error::DepthExceeded {
                depth: grades.len(),
                max: MAX_RANKING_DEPTH,
            });
        }
        let retrieved = grades
            .iter()
            .filter(|g| g.is_relevant(binarization_threshold))
            .count();
        if total_relevant < retrieved {
            return Err(Error::InvalidRanking {
                topic_id,
                reason: format!(
                    "total_relevant {total_relevant} is below the {retrieved} relevant documents retrieved"
                ),
            });
        }
        Ok(JudgedRanking {
            topic_id,
            grades,
            total_relevant,
            binarization_threshold,
        })
    }

    pub fn topic_id(&self) -> &str {
        &self.topic_id
    }

    /// Grades ordered by rank; index 0 is rank 1.
    pub fn grades(&self) -> &[RelevanceGrade] {
        &self.grades
    }

    /// Number of retrieved documents.
    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Relevant documents in the full judgment pool, retrieved or not.
    pub fn total_relevant(&self) -> usize {
        self.total_relevant
    }

    pub fn binarization_threshold(&self) -> u32 {
        self.binarization_threshold
    }

    /// Binarized relevance per rank, in rank order.
    pub fn relevance_flags(&self) -> impl Iterator<Item = bool> + '_ {
        self.grades
            .iter()
            .map(|g| g.is_relevant(self.binarization_threshold))
    }

    /// Number of relevant documents actually retrieved.
    pub fn retrieved_relevant(&self) -> usize {
        self.relevance_flags().filter(|&r| r).count()
    }

    /// A copy truncated to the first `depth` ranks. The judgment pool count
    /// is unchanged: documents cut off become unretrieved relevant ones.
    pub fn truncated(&self, depth: usize) -> JudgedRanking {
        let mut out = self.clone();
        out.grades.truncate(depth);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_binarize_against_threshold() {
        let g = RelevanceGrade::from(2);
        assert!(g.is_relevant(1));
        assert!(g.is_relevant(2));
        assert!(!g.is_relevant(3));
        assert!(!RelevanceGrade::from(0).is_relevant(1));
    }

    #[test]
    fn pool_count_must_cover_retrieved() {
        let err = JudgedRanking::new("t", [1, 0, 1], 1, 1).unwrap_err();
        assert!(matches!(err, Error::InvalidRanking { .. }));
        assert!(JudgedRanking::new("t", [1, 0, 1], 2, 1).is_ok());
    }

    #[test]
    fn threshold_zero_rejected() {
        let err = JudgedRanking::new("t", [1], 1, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidRanking { .. }));
    }

    #[test]
    fn depth_cap_enforced() {
        let grades = vec![0u32; MAX_RANKING_DEPTH + 1];
        let err = JudgedRanking::new("t", grades, 0, 1).unwrap_err();
        assert!(matches!(err, Error::DepthExceeded { .. }));
    }

    #[test]
    fn truncation_keeps_pool_count() {
        let r = JudgedRanking::new("t", [1, 0, 1, 1], 3, 1).unwrap();
        let t = r.truncated(2);
        assert_eq!(t.len(), 2);
        assert_eq!(t.total_relevant(), 3);
        assert_eq!(t.retrieved_relevant(), 1);
    }

    #[test]
    fn higher_threshold_drops_relevance() {
        let r = JudgedRanking::new("t", [2, 1, 0], 1, 2).unwrap();
        let flags: Vec<bool> = r.relevance_flags().collect();
        assert_eq!(flags, vec![true, false, false]);
        assert_eq!(r.retrieved_relevant(), 1);
    }
}
