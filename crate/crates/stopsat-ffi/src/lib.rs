//! C ABI over the expected-satisfaction metrics.
//!
//! Conventions:
//!
//! * Every fallible call returns a [`StopsatStatus`]; out-parameters are
//!   written only when the status is `STOPSAT_STATUS_OK`.
//! * Rankings are opaque handles created with [`stopsat_ranking_new`] and
//!   released with [`stopsat_ranking_free`].
//! * The message for the most recent failure on the current thread is
//!   available through [`stopsat_last_error_message`]; free it with
//!   [`stopsat_string_free`].
//!
//! The generated header lives at `include/stopsat.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::slice;

use stopsat::errors::Error;
use stopsat::metric::{expected_satisfaction, HazardSchedule, SatisfactionSchedule};
use stopsat::ranking::JudgedRanking;
use stopsat::satisfaction::{
    gain_satisfaction, navigational_satisfaction, precision_satisfaction, GainMap,
};
use stopsat::stopping::{ap_hazards, rbp_hazards, we_hazards, WeParams};

/// Result of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopsatStatus {
    /// The call succeeded and out-parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was outside its allowed range; see the last error message.
    InvalidArgument = 2,
    /// The metric is undefined for this ranking (no relevant documents).
    UndefinedMetric = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
}

/// Satisfaction model selector for the scoring calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopsatSatisfaction {
    /// Precision at the stopping rank.
    Precision = 0,
    /// Binary gain of the stopped-at document (1 at or above the ranking's
    /// binarization threshold, 0 below).
    GainBinary = 1,
    /// 1 once the first relevant document has been passed, else 0.
    Navigational = 2,
}

/// Parameters of the willingness/expectation stopping model.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct StopsatWeParams {
    /// Scale of the hazard, in (0, 1].
    pub base_hazard: f64,
    /// Smoothing rate for the expectation update, in (0, 1].
    pub expectation_smoothing: f64,
    /// Initial expectation, in [0, 1].
    pub expectation_prior: f64,
    /// Exponent on the spent-willingness term, >= 0.
    pub willingness_exponent: f64,
    /// Exponent on the disappointed-expectation term, >= 0.
    pub expectation_exponent: f64,
}

/// Opaque handle to a judged ranking.
pub struct StopsatRanking {
    inner: JudgedRanking,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record_error(message: String) {
    let cstring = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_for(err: &Error) -> StopsatStatus {
    match err {
        Error::UndefinedMetric { .. } => StopsatStatus::UndefinedMetric,
        _ => StopsatStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> StopsatStatus {
    let status = status_for(&err);
    record_error(err.to_string());
    status
}

fn fail_null(what: &str) -> StopsatStatus {
    record_error(format!("{what} must not be null"));
    StopsatStatus::NullArgument
}

/// Creates a ranking handle from grades ordered by rank.
///
/// `grades` may be null only when `grades_len` is zero. `total_relevant`
/// counts the relevant documents in the whole judgment pool and must be at
/// least the number of relevant documents among `grades`; grades at or above
/// `binarization_threshold` (>= 1) count as relevant.
///
/// # Safety
///
/// `topic_id` must point to a NUL-terminated string, `grades` to
/// `grades_len` readable `uint32_t`s, and `out_ranking` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn stopsat_ranking_new(
    topic_id: *const c_char,
    grades: *const u32,
    grades_len: usize,
    total_relevant: usize,
    binarization_threshold: u32,
    out_ranking: *mut *mut StopsatRanking,
) -> StopsatStatus {
    if out_ranking.is_null() {
        return fail_null("out_ranking");
    }
    if topic_id.is_null() {
        return fail_null("topic_id");
    }
    if grades.is_null() && grades_len > 0 {
        return fail_null("grades");
    }
    let topic_id = match CStr::from_ptr(topic_id).to_str() {
        Ok(s) => s,
        Err(_) => {
            record_error("topic_id is not valid UTF-8".to_owned());
            return StopsatStatus::InvalidUtf8;
        }
    };
    let grades: &[u32] = if grades_len == 0 {
        &[]
    } else {
        slice::from_raw_parts(grades, grades_len)
    };
    match JudgedRanking::new(
        topic_id,
        grades.iter().copied(),
        total_relevant,
        binarization_threshold,
    ) {
        Ok(inner) => {
            *out_ranking = Box::into_raw(Box::new(StopsatRanking { inner }));
            StopsatStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Releases a ranking handle. A null pointer is ignored.
///
/// # Safety
///
/// `ranking` must be null or a pointer returned by [`stopsat_ranking_new`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn stopsat_ranking_free(ranking: *mut StopsatRanking) {
    if !ranking.is_null() {
        drop(Box::from_raw(ranking));
    }
}

unsafe fn score_into(
    ranking: *const StopsatRanking,
    satisfaction: StopsatSatisfaction,
    hazards: impl FnOnce(&JudgedRanking) -> Result<HazardSchedule, Error>,
    out_score: *mut f64,
    out_residual: *mut f64,
) -> StopsatStatus {
    if ranking.is_null() {
        return fail_null("ranking");
    }
    if out_score.is_null() {
        return fail_null("out_score");
    }
    if out_residual.is_null() {
        return fail_null("out_residual");
    }
    let ranking = &(*ranking).inner;
    let hazards = match hazards(ranking) {
        Ok(h) => h,
        Err(err) => return fail(err),
    };
    let sats: SatisfactionSchedule = match satisfaction {
        StopsatSatisfaction::Precision => precision_satisfaction(ranking),
        StopsatSatisfaction::GainBinary => {
            let gains = match GainMap::binary(ranking.binarization_threshold()) {
                Ok(g) => g,
                Err(err) => return fail(err),
            };
            match gain_satisfaction(ranking, &gains) {
                Ok(s) => s,
                Err(err) => return fail(err),
            }
        }
        StopsatSatisfaction::Navigational => navigational_satisfaction(ranking),
    };
    match expected_satisfaction(&hazards, &sats) {
        Ok(score) => {
            *out_score = score.expected_satisfaction;
            *out_residual = score.residual;
            StopsatStatus::Ok
        }
        Err(err) => fail(err),
    }
}

/// Scores a ranking under the average-precision stopping model.
///
/// With `STOPSAT_SATISFACTION_PRECISION` this equals average precision.
///
/// # Safety
///
/// `ranking` must come from [`stopsat_ranking_new`] and not be freed;
/// `out_score` and `out_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stopsat_ap_score(
    ranking: *const StopsatRanking,
    satisfaction: StopsatSatisfaction,
    out_score: *mut f64,
    out_residual: *mut f64,
) -> StopsatStatus {
    score_into(ranking, satisfaction, ap_hazards, out_score, out_residual)
}

/// Scores a ranking under the constant-hazard stopping model with the given
/// persistence in [0, 1).
///
/// With `STOPSAT_SATISFACTION_GAIN_BINARY` this equals rank-biased precision.
///
/// # Safety
///
/// Same pointer conventions as [`stopsat_ap_score`].
#[no_mangle]
pub unsafe extern "C" fn stopsat_rbp_score(
    ranking: *const StopsatRanking,
    persistence: f64,
    satisfaction: StopsatSatisfaction,
    out_score: *mut f64,
    out_residual: *mut f64,
) -> StopsatStatus {
    score_into(
        ranking,
        satisfaction,
        |r| rbp_hazards(r.len(), persistence),
        out_score,
        out_residual,
    )
}

/// Scores a ranking under the willingness/expectation stopping model.
///
/// # Safety
///
/// Same pointer conventions as [`stopsat_ap_score`]; `params` must point to
/// a readable [`StopsatWeParams`].
#[no_mangle]
pub unsafe extern "C" fn stopsat_we_score(
    ranking: *const StopsatRanking,
    params: *const StopsatWeParams,
    satisfaction: StopsatSatisfaction,
    out_score: *mut f64,
    out_residual: *mut f64,
) -> StopsatStatus {
    if params.is_null() {
        return fail_null("params");
    }
    let params = *params;
    let params = WeParams {
        base_hazard: params.base_hazard,
        expectation_smoothing: params.expectation_smoothing,
        expectation_prior: params.expectation_prior,
        willingness_exponent: params.willingness_exponent,
        expectation_exponent: params.expectation_exponent,
    };
    score_into(
        ranking,
        satisfaction,
        |r| we_hazards(r, &params),
        out_score,
        out_residual,
    )
}

/// Returns the message of the most recent failure on this thread, or null if
/// none occurred. The caller owns the string and must release it with
/// [`stopsat_string_free`].
#[no_mangle]
pub extern "C" fn stopsat_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. A null pointer is ignored.
///
/// # Safety
///
/// `s` must be null or a pointer obtained from [`stopsat_last_error_message`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn stopsat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn stopsat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
