//! Expected-satisfaction metrics for ranked retrieval.
//!
//! The framework scores a ranking by modeling a user who walks it top to
//! bottom and, at each rank `k`, stops with a conditional probability
//! (the *hazard* `p_k`) and realizes a satisfaction `s_k`. The metric is the
//! expectation over stopping ranks,
//!
//! ```text
//! E[S] = Σ_k (∏_{u<k} (1 − p_u)) · p_k · s_k
//! ```
//!
//! together with the *residual*: the probability mass of never stopping
//! within the ranking, which contributes zero satisfaction but is reported
//! so that a low score from dissatisfaction can be told apart from one
//! caused by non-stopping.
//!
//! Classic metrics are instances of this family:
//!
//! * **Average precision** — hazards that stop only at relevant documents,
//!   inversely proportional to the relevant documents still to come, paired
//!   with precision-at-stop satisfaction ([`stopping::ap_hazards`]).
//! * **Rank-biased precision** — a constant hazard `1 − persistence` paired
//!   with the gain of the stopped-at document ([`stopping::rbp_hazards`]).
//!
//! Beyond the classics, a parametric willingness/expectation model
//! ([`stopping::WeParams`]) derives hazards from how much of the relevant
//! pool is still ahead and how the user's expectation of finding relevant
//! material evolves while reading.
//!
//! The crate also ships TREC-format ingestion ([`trec`]), a Monte Carlo
//! browsing simulator that validates the closed form ([`simulate`]), and a
//! CLI (`stopsat`) over both.
//!
//! # Example
//!
//! ```
//! use stopsat::config::MetricConfig;
//! use stopsat::ranking::JudgedRanking;
//!
//! // Three retrieved documents, first and third relevant, two relevant in
//! // the judgment pool: the default configuration reproduces AP = 5/6.
//! let ranking = JudgedRanking::new("t1", [1, 0, 1], 2, 1)?;
//! let score = MetricConfig::default().evaluate_ranking(&ranking)?;
//! assert!((score.expected_satisfaction - 5.0 / 6.0).abs() < 1e-12);
//! # Ok::<(), stopsat::errors::Error>(())
//! ```

pub mod config;
pub mod errors;
pub mod metric;
pub mod oracles;
pub mod ranking;
pub mod report;
pub mod satisfaction;
pub mod simulate;
pub mod stopping;
pub mod trec;

pub use config::{MetricConfig, SatisfactionModel, StoppingModel, UnjudgedPolicy};
pub use errors::{Error, Result};
pub use metric::{
    expected_satisfaction, stop_weights, HazardSchedule, MetricScore, SatisfactionSchedule,
    StopWeights,
};
pub use ranking::{JudgedRanking, RelevanceGrade};
pub use report::EvaluationReport;
pub use satisfaction::GainMap;
pub use stopping::WeParams;

/// Hard cap on ranking depth, guarding against degenerate inputs.
pub const MAX_RANKING_DEPTH: usize = 100_000;
