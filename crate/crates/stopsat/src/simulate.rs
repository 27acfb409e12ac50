//! Monte Carlo validation of the closed-form metric.
//!
//! Each trial walks the ranking top to bottom, stopping at rank `k` with
//! probability `p_k`; a trial that stops at `k` scores `s_k`, and one that
//! exhausts the ranking scores 0, mirroring the residual convention of the
//! closed form. Satisfaction is deterministic given the stopping rank, so
//! the whole simulation reduces to a stop-rank histogram.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::errors::{Error, Result};
use crate::metric::{HazardSchedule, SatisfactionSchedule};

/// Outcome of a batch of simulated browsing sessions.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    /// Mean satisfaction over all trials (never-stop trials score 0).
    pub mean_satisfaction: f64,
    /// Standard error of the mean; `None` for a single trial.
    pub std_error: Option<f64>,
    /// How many trials stopped at each rank.
    pub stop_counts: Vec<u64>,
    /// How many trials ran off the end without stopping.
    pub never_stop: u64,
}

/// Runs `trials` independent browsing sessions, deterministically derived
/// from `seed`. Trials are distributed across threads; the histogram is a
/// sum of per-trial counts, so the result does not depend on scheduling.
pub fn simulate(
    hazards: &HazardSchedule,
    sats: &SatisfactionSchedule,
    trials: u64,
    seed: u64,
) -> Result<SimResult> {
    if hazards.len() != sats.len() {
        return Err(Error::ScheduleLengthMismatch {
            hazards: hazards.len(),
            satisfactions: sats.len(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "at least one trial is required".into(),
        });
    }

    let n = hazards.len();
    let p = hazards.values();
    // Histogram slot n counts never-stop trials.
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let mut stopped = n;
                for (k, &hazard) in p.iter().enumerate() {
                    if rng.gen::<f64>() < hazard {
                        stopped = k;
                        break;
                    }
                }
                acc[stopped] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let never_stop = counts[n];
    let stop_counts: Vec<u64> = counts[..n].to_vec();
    let total = trials as f64;
    let mean_satisfaction: f64 = stop_counts
        .iter()
        .zip(sats.values())
        .map(|(&c, &s)| (c as f64 / total) * s)
        .sum();
    let std_error = if trials >= 2 {
        let mut variance: f64 = stop_counts
            .iter()
            .zip(sats.values())
            .map(|(&c, &s)| (c as f64 / total) * (s - mean_satisfaction).powi(2))
            .sum();
        variance += (never_stop as f64 / total) * mean_satisfaction.powi(2);
        // Sample (n-1) correction before dividing back down by n.
        let sample_variance = variance * total / (total - 1.0);
        Some((sample_variance / total).sqrt())
    } else {
        None
    };

    Ok(SimResult {
        trials,
        mean_satisfaction,
        std_error,
        stop_counts,
        never_stop,
    })
}
