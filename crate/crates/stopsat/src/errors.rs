//! Error types shared across the crate.

/// Errors raised while building rankings, deriving schedules, or parsing
/// evaluation data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A conditional stopping probability lies outside `[0, 1]`.
    #[error("hazard at rank {rank} is {value}; must lie in [0, 1]")]
    HazardOutOfRange { rank: usize, value: f64 },

    /// A satisfaction value lies outside `[0, 1]`.
    #[error("satisfaction at rank {rank} is {value}; must lie in [0, 1]")]
    SatisfactionOutOfRange { rank: usize, value: f64 },

    /// Hazard and satisfaction schedules cover a different number of ranks.
    #[error("schedule length mismatch: {hazards} hazards vs {satisfactions} satisfaction values")]
    ScheduleLengthMismatch {
        hazards: usize,
        satisfactions: usize,
    },

    /// A ranking or schedule exceeds the supported depth.
    #[error("depth {depth} exceeds the supported maximum of {max} ranks")]
    DepthExceeded { depth: usize, max: usize },

    /// The metric has no defined value for this topic, e.g. AP with zero
    /// relevant documents in the judgment pool.
    #[error("metric undefined for topic {topic_id}: {reason}")]
    UndefinedMetric { topic_id: String, reason: String },

    /// A model or configuration parameter is outside its domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A ranking violates one of its structural invariants.
    #[error("invalid ranking for topic {topic_id}: {reason}")]
    InvalidRanking { topic_id: String, reason: String },

    /// A grade appeared that the configured gain map does not cover.
    #[error("no gain mapped for grade {grade}")]
    UnmappedGrade { grade: u32 },

    /// The gain map itself is malformed.
    #[error("invalid gain map: {0}")]
    InvalidGainMap(String),

    /// A qrels or run line could not be parsed.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// The same document appeared twice for one topic.
    #[error("duplicate document {doc_id} for topic {topic_id}")]
    DuplicateDocument { topic_id: String, doc_id: String },

    /// An unjudged document was found while the policy demands judgments.
    #[error("unjudged document {doc_id} at rank {rank} of topic {topic_id}")]
    UnjudgedDocument {
        topic_id: String,
        doc_id: String,
        rank: usize,
    },

    /// A report could not be read back.
    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
