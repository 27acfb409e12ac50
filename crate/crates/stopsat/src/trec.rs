//! Readers for the TREC exchange formats and the join that turns a run plus
//! judgments into scoreable rankings.
//!
//! Qrels lines carry four whitespace-separated fields
//! (`topic iteration doc grade`); run lines carry six
//! (`topic iteration doc rank score tag`). The iteration field is ignored in
//! both, and the rank field of a run is ignored too: documents are ordered by
//! descending score, with ties broken by ascending document id so that a
//! shuffled run file scores identically.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::BufRead;

use crate::config::{MetricConfig, UnjudgedPolicy};
use crate::errors::{Error, Result};
use crate::ranking::JudgedRanking;

/// Relevance judgments, keyed by topic and then document id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QrelsSet {
    topics: BTreeMap<String, BTreeMap<String, u32>>,
    clamped_negative: usize,
}

impl QrelsSet {
    /// Topics in ascending id order.
    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    pub fn contains_topic(&self, topic_id: &str) -> bool {
        self.topics.contains_key(topic_id)
    }

    /// The judged grade of a document, if any.
    pub fn grade(&self, topic_id: &str, doc_id: &str) -> Option<u32> {
        self.topics.get(topic_id)?.get(doc_id).copied()
    }

    /// Number of judged documents whose grade reaches `threshold`, counting
    /// documents no run retrieved.
    pub fn relevant_count(&self, topic_id: &str, threshold: u32) -> usize {
        self.topics
            .get(topic_id)
            .map(|docs| docs.values().filter(|&&g| g >= threshold).count())
            .unwrap_or(0)
    }

    /// How many lines carried a negative grade and were clamped to zero.
    pub fn clamped_negative(&self) -> usize {
        self.clamped_negative
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

/// One retrieved document before ranks are assigned.
#[derive(Debug, Clone, PartialEq)]
struct RunEntry {
    doc_id: String,
    score: f64,
}

/// A system run, keyed by topic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSet {
    topics: BTreeMap<String, Vec<RunEntry>>,
}

impl RunSet {
    /// Topics in ascending id order.
    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    /// Document ids for one topic in scoring order.
    pub fn ranked_docs(&self, topic_id: &str) -> Option<impl Iterator<Item = &str>> {
        self.topics
            .get(topic_id)
            .map(|entries| entries.iter().map(|e| e.doc_id.as_str()))
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }
}

/// Reads qrels from `topic iteration doc grade` lines. Blank lines are
/// skipped; negative grades clamp to zero; judging the same document twice
/// for one topic is an error.
pub fn parse_qrels<R: BufRead>(reader: R) -> Result<QrelsSet> {
    let mut set = QrelsSet::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let grade: i64 = fields[3].parse().map_err(|_| Error::Parse {
            line: line_no,
            reason: format!("grade `{}` is not an integer", fields[3]),
        })?;
        let grade = if grade < 0 {
            set.clamped_negative += 1;
            0
        } else {
            u32::try_from(grade).map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("grade `{grade}` does not fit in 32 bits"),
            })?
        };
        let topic = set.topics.entry(fields[0].to_owned()).or_default();
        match topic.entry(fields[2].to_owned()) {
            Entry::Vacant(slot) => {
                slot.insert(grade);
            }
            Entry::Occupied(_) => {
                return Err(Error::DuplicateDocument {
                    topic_id: fields[0].to_owned(),
                    doc_id: fields[2].to_owned(),
                });
            }
        }
    }
    Ok(set)
}

/// Reads a run from `topic iteration doc rank score tag` lines. The rank
/// field is ignored; documents are reordered by descending score with ties
/// broken by ascending document id. Non-finite scores and documents retrieved
/// twice for one topic are errors.
pub fn parse_run<R: BufRead>(reader: R) -> Result<RunSet> {
    let mut topics: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let score: f64 = fields[4].parse().map_err(|_| Error::Parse {
            line: line_no,
            reason: format!("score `{}` is not a number", fields[4]),
        })?;
        if !score.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("score `{score}` is not finite"),
            });
        }
        let entries = topics.entry(fields[0].to_owned()).or_default();
        if entries.iter().any(|e| e.doc_id == fields[2]) {
            return Err(Error::DuplicateDocument {
                topic_id: fields[0].to_owned(),
                doc_id: fields[2].to_owned(),
            });
        }
        entries.push(RunEntry {
            doc_id: fields[2].to_owned(),
            score,
        });
    }
    for entries in topics.values_mut() {
        entries.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.doc_id.cmp(&b.doc_id))
        });
    }
    Ok(RunSet { topics })
}

/// Joins a run against judgments, producing one ranking per topic.
///
/// The topic set is the union of both files, in ascending id order: topics
/// the run skipped become empty rankings (the user finds nothing and expected
/// satisfaction is zero), and topics with no judgments flow through so the
/// metric can report them as undefined. The unjudged policy is applied before
/// ranks are assigned, so under [`UnjudgedPolicy::Exclude`] later documents
/// move up. The relevant-document total comes from the whole judgment pool,
/// including documents the run never retrieved.
pub fn join(qrels: &QrelsSet, run: &RunSet, cfg: &MetricConfig) -> Result<Vec<JudgedRanking>> {
    let mut topic_ids: Vec<&str> = run.topics.keys().map(String::as_str).collect();
    for topic_id in qrels.topics.keys() {
        if !run.topics.contains_key(topic_id) {
            topic_ids.push(topic_id);
        }
    }
    topic_ids.sort_unstable();

    let threshold = cfg.binarization_threshold;
    let mut rankings = Vec::with_capacity(topic_ids.len());
    for topic_id in topic_ids {
        let mut grades = Vec::new();
        if let Some(entries) = run.topics.get(topic_id) {
            grades.reserve(entries.len());
            for entry in entries {
                match qrels.grade(topic_id, &entry.doc_id) {
                    Some(grade) => grades.push(grade),
                    None => match cfg.unjudged {
                        UnjudgedPolicy::Nonrelevant => grades.push(0),
                        UnjudgedPolicy::Exclude => {}
                        UnjudgedPolicy::Error => {
                            return Err(Error::UnjudgedDocument {
                                topic_id: topic_id.to_owned(),
                                doc_id: entry.doc_id.clone(),
                                rank: grades.len() + 1,
                            });
                        }
                    },
                }
            }
        }
        if let Some(depth) = cfg.max_depth {
            grades.truncate(depth);
        }
        // Every relevant grade in `grades` came from the pool, so the pool
        // count is always a valid total.
        let total_relevant = qrels.relevant_count(topic_id, threshold);
        rankings.push(JudgedRanking::new(
            topic_id,
            grades,
            total_relevant,
            threshold,
        )?);
    }
    Ok(rankings)
}
