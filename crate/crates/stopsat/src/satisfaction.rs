//! Satisfaction models: what a user who stops at rank `k` takes away.
//!
//! Informational intents are served by precision at the stopping rank,
//! navigational ones by a step function that saturates at the first relevant
//! document, and gain-at-stop ties satisfaction to the stopped-at document
//! alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::errors::{Error, Result};
use crate::metric::SatisfactionSchedule;
use crate::ranking::{JudgedRanking, RelevanceGrade};

/// Maps relevance grades to gains in `[0, 1]`.
///
/// Grade 0 always maps to 0 and gains never decrease with the grade, so the
/// expected-satisfaction bound carries over unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainMap {
    /// Gain 1 for grades at or above the threshold, 0 below.
    Binary { threshold: u32 },
    /// An explicit grade-to-gain table. Grades missing from the table are a
    /// configuration error at lookup time.
    Table(BTreeMap<u32, f64>),
}

impl GainMap {
    /// The binarizing gain map; the threshold must be at least 1.
    pub fn binary(threshold: u32) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidGainMap(
                "binary gain threshold must be at least 1".into(),
            ));
        }
        Ok(GainMap::Binary { threshold })
    }

    /// Builds a table gain map, checking bounds, monotonicity, and that
    /// grade 0 (when present) maps to 0.
    pub fn table(entries: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (grade, gain) in entries {
            if !gain.is_finite() || !(0.0..=1.0).contains(&gain) {
                return Err(Error::InvalidGainMap(format!(
                    "gain {gain} for grade {grade} is outside [0, 1]"
                )));
            }
            if grade == 0 && gain != 0.0 {
                return Err(Error::InvalidGainMap(format!(
                    "grade 0 must map to gain 0, got {gain}"
                )));
            }
            if map.insert(grade, gain).is_some() {
                return Err(Error::InvalidGainMap(format!(
                    "grade {grade} mapped more than once"
                )));
            }
        }
        let mut last = f64::NEG_INFINITY;
        for (&grade, &gain) in &map {
            if gain < last {
                return Err(Error::InvalidGainMap(format!(
                    "gains must be non-decreasing in grade; grade {grade} breaks the order"
                )));
            }
            last = gain;
        }
        Ok(GainMap::Table(map))
    }

    /// The gain for a grade, or a configuration error if the grade is not
    /// covered.
    pub fn gain(&self, grade: RelevanceGrade) -> Result<f64> {
        match self {
            GainMap::Binary { threshold } => Ok(if grade.is_relevant(*threshold) {
                1.0
            } else {
                0.0
            }),
            GainMap::Table(map) => map
                .get(&grade.value())
                .copied()
                .ok_or(Error::UnmappedGrade {
                    grade: grade.value(),
                }),
        }
    }
}

/// Precision at each rank: the satisfaction of an informational user who
/// stops there having seen the whole prefix.
pub fn precision_satisfaction(ranking: &JudgedRanking) -> SatisfactionSchedule {
    let mut relevant_seen = 0usize;
    let values = ranking
        .relevance_flags()
        .enumerate()
        .map(|(i, relevant)| {
            if relevant {
                relevant_seen += 1;
            }
            relevant_seen as f64 / (i + 1) as f64
        })
        .collect();
    SatisfactionSchedule::from_checked(values)
}

/// Gain of the stopped-at document alone, looked up from the gain map.
pub fn gain_satisfaction(ranking: &JudgedRanking, gains: &GainMap) -> Result<SatisfactionSchedule> {
    let values = ranking
        .grades()
        .iter()
        .map(|&g| gains.gain(g))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SatisfactionSchedule::from_checked(values))
}

/// Navigational satisfaction: 1 from the first relevant document onward,
/// 0 before it. One relevant document is enough.
pub fn navigational_satisfaction(ranking: &JudgedRanking) -> SatisfactionSchedule {
    let mut found = false;
    let values = ranking
        .relevance_flags()
        .map(|relevant| {
            found |= relevant;
            if found {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    SatisfactionSchedule::from_checked(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::expected_satisfaction;
    use crate::stopping::rbp_hazards;
    use proptest::prelude::*;

    fn ranking(grades: &[u32], total_relevant: usize) -> JudgedRanking {
        JudgedRanking::new("t", grades.iter().copied(), total_relevant, 1).unwrap()
    }

    #[test]
    fn precision_walks_the_prefix() {
        let s = precision_satisfaction(&ranking(&[1, 0, 1], 2));
        assert_eq!(s.values(), &[1.0, 0.5, 2.0 / 3.0]);
        assert_eq!(
            precision_satisfaction(&ranking(&[0, 0], 0)).values(),
            &[0.0, 0.0]
        );
        assert_eq!(
            precision_satisfaction(&ranking(&[1, 1], 2)).values(),
            &[1.0, 1.0]
        );
    }

    #[test]
    fn gain_lookup_follows_the_table() {
        let identity = GainMap::binary(1).unwrap();
        let s = gain_satisfaction(&ranking(&[1, 0, 1], 2), &identity).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0, 1.0]);

        let graded = GainMap::table([(0, 0.0), (1, 0.5), (2, 1.0)]).unwrap();
        let r = JudgedRanking::new("t", [2, 1], 2, 1).unwrap();
        let s = gain_satisfaction(&r, &graded).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5]);
    }

    #[test]
    fn gain_with_rbp_matches_hand_expansion() {
        // Binary gains with constant hazard 0.5 over [1, 0, 1]:
        // 0.5*1 + 0.25*0 + 0.125*1 = 0.625.
        let r = ranking(&[1, 0, 1], 2);
        let h = rbp_hazards(3, 0.5).unwrap();
        let s = gain_satisfaction(&r, &GainMap::binary(1).unwrap()).unwrap();
        let score = expected_satisfaction(&h, &s).unwrap();
        assert_eq!(score.expected_satisfaction, 0.625);
        assert_eq!(score.residual, 0.125);
    }

    #[test]
    fn unmapped_grade_is_a_configuration_error() {
        let gains = GainMap::table([(0, 0.0), (1, 1.0)]).unwrap();
        let r = JudgedRanking::new("t", [2], 1, 1).unwrap();
        assert!(matches!(
            gain_satisfaction(&r, &gains).unwrap_err(),
            Error::UnmappedGrade { grade: 2 }
        ));
    }

    #[test]
    fn malformed_gain_maps_rejected() {
        assert!(GainMap::table([(0, 0.5)]).is_err());
        assert!(GainMap::table([(1, 1.5)]).is_err());
        assert!(GainMap::table([(1, 0.9), (2, 0.3)]).is_err());
        assert!(GainMap::table([(1, f64::NAN)]).is_err());
        assert!(GainMap::binary(0).is_err());
    }

    #[test]
    fn navigational_steps_at_first_relevant() {
        assert_eq!(
            navigational_satisfaction(&ranking(&[0, 1, 0], 1)).values(),
            &[0.0, 1.0, 1.0]
        );
        assert_eq!(
            navigational_satisfaction(&ranking(&[1, 0], 1)).values(),
            &[1.0, 1.0]
        );
        assert_eq!(
            navigational_satisfaction(&ranking(&[0, 0, 0], 0)).values(),
            &[0.0, 0.0, 0.0]
        );
    }

    proptest! {
        #[test]
        fn schedules_stay_bounded(
            grades in proptest::collection::vec(0u32..3, 0..60),
            extra in 0usize..3
        ) {
            let total = grades.iter().filter(|&&g| g >= 1).count() + extra;
            let r = ranking(&grades, total);
            let gains = GainMap::table([(0, 0.0), (1, 0.4), (2, 1.0)]).unwrap();
            for s in [
                precision_satisfaction(&r),
                navigational_satisfaction(&r),
                gain_satisfaction(&r, &gains).unwrap(),
            ] {
                prop_assert!(s.values().iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }

        #[test]
        fn navigational_is_monotone(grades in proptest::collection::vec(0u32..2, 1..60)) {
            let total = grades.iter().filter(|&&g| g >= 1).count();
            let s = navigational_satisfaction(&ranking(&grades, total));
            for pair in s.values().windows(2) {
                prop_assert!(pair[0] <= pair[1]);
            }
        }

        /// k*s_k - (k-1)*s_{k-1} recovers the 0/1 relevance of rank k.
        #[test]
        fn precision_increments_are_binary(grades in proptest::collection::vec(0u32..2, 1..60)) {
            let total = grades.iter().filter(|&&g| g >= 1).count();
            let s = precision_satisfaction(&ranking(&grades, total));
            let v = s.values();
            for k in 1..=v.len() {
                let prev = if k == 1 { 0.0 } else { (k - 1) as f64 * v[k - 2] };
                let step = k as f64 * v[k - 1] - prev;
                let expected = f64::from(grades[k - 1] >= 1);
                prop_assert!((step - expected).abs() < 1e-9);
            }
        }

        /// The identity binary gain reproduces binarized grades.
        #[test]
        fn binary_gain_is_binarized_grade(grades in proptest::collection::vec(0u32..4, 0..40)) {
            let total = grades.iter().filter(|&&g| g >= 2).count();
            let r = JudgedRanking::new("t", grades.iter().copied(), total, 2).unwrap();
            let s = gain_satisfaction(&r, &GainMap::binary(2).unwrap()).unwrap();
            for (value, grade) in s.values().iter().zip(&grades) {
                prop_assert_eq!(*value, f64::from(*grade >= 2));
            }
        }
    }
}
