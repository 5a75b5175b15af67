//! C ABI over `tweetcast`.
//!
//! Objects are opaque handles created by `*_load`/`*_run` functions and
//! released with the matching `*_free`. Every function that can fail returns
//! a [`TcStatus`]; on failure [`tc_last_error`] describes the error on the
//! calling thread. Strings returned by the library are freed with
//! [`tc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use tweetcast::census::CensusPaths;
use tweetcast::model::shares_from_signal;
use tweetcast::{
    Candidate, Forecast, ForecastModel, Lexicon, PartyAlignment, StateTable, TwitterSupport,
    WeightMode,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Data = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcModel {
    Baseline = 0,
    Model1 = 1,
    Model2 = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcWeightMode {
    Normalized = 0,
    Literal = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcWinner {
    Tie = 0,
    First = 1,
    Second = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TcScore {
    pub positive: u64,
    pub negative: u64,
    pub net: i64,
    pub matched_tokens: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcStateShare {
    pub share_1: f64,
    pub share_2: f64,
    pub margin: f64,
    pub winner: TcWinner,
    pub electoral_votes: u32,
}

pub struct TcLexicon(Lexicon);

pub struct TcStateTable(StateTable);

pub struct TcForecast {
    inner: Forecast,
    /// `state` names, kept alive for `tc_forecast_state_name`.
    names: Vec<CString>,
    ev: Vec<u32>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TcStatus, String);

impl Failure {
    fn data(e: impl std::fmt::Display) -> Failure {
        Failure(TcStatus::Data, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TcStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(TcStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| Failure(TcStatus::NullPointer, format!("{what} is null")))
}

fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TcStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null, caller guarantees NUL termination.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(TcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn opt_c_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        c_str(p, what).map(Some)
    }
}

fn into_handle<T>(value: T, out: *mut *mut T) -> Result<(), Failure> {
    *out_ptr(out, "out")? = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        // SAFETY: pointer came from Box::into_raw in into_handle.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Bundled AFINN-111 lexicon.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_lexicon_afinn111(out: *mut *mut TcLexicon) -> TcStatus {
    guard(|| into_handle(TcLexicon(Lexicon::afinn111()), out))
}

/// Loads a tab-separated `term<TAB>valence` file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_lexicon_load(
    path: *const c_char,
    out: *mut *mut TcLexicon,
) -> TcStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let lex = Lexicon::from_path(Path::new(path)).map_err(|e| match e {
            tweetcast::lexicon::LexiconError::Io(_) => {
                Failure(TcStatus::Io, format!("{path}: {e}"))
            }
            other => Failure(TcStatus::Data, format!("{path}: {other}")),
        })?;
        into_handle(TcLexicon(lex), out)
    })
}

/// # Safety
/// `lex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_lexicon_len(lex: *const TcLexicon) -> usize {
    // SAFETY: see contract.
    unsafe { lex.as_ref() }.map_or(0, |l| l.0.len())
}

/// Unigram score of `text`.
///
/// # Safety
/// `lex` must be a live handle, `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_lexicon_score(
    lex: *const TcLexicon,
    text: *const c_char,
    out: *mut TcScore,
) -> TcStatus {
    guard(|| {
        let lex = non_null(lex, "lexicon")?;
        let s = lex.0.score(c_str(text, "text")?);
        *out_ptr(out, "out")? = TcScore {
            positive: s.positive,
            negative: s.negative,
            net: s.net,
            matched_tokens: s.matched_tokens,
        };
        Ok(())
    })
}

/// # Safety
/// `lex` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_lexicon_free(lex: *mut TcLexicon) {
    unsafe { free_handle(lex) }
}

/// Joins and validates the per-state inputs. `weights` may be null for equal
/// turnout weights.
///
/// # Safety
/// Paths must be NUL-terminated (or null for `weights`); `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_state_table_load(
    census: *const c_char,
    priors: *const c_char,
    apportionment: *const c_char,
    weights: *const c_char,
    out: *mut *mut TcStateTable,
) -> TcStatus {
    guard(|| {
        let census = c_str(census, "census")?;
        let priors = c_str(priors, "priors")?;
        let apportionment = c_str(apportionment, "apportionment")?;
        let weights = opt_c_str(weights, "weights")?;
        let paths = CensusPaths {
            census: Path::new(census),
            priors: Path::new(priors),
            apportionment: Path::new(apportionment),
            weights: weights.map(Path::new),
        };
        let table = paths.load().map_err(|e| match e {
            tweetcast::census::CensusError::Open { .. } => Failure(TcStatus::Io, e.to_string()),
            other => Failure::data(other),
        })?;
        into_handle(TcStateTable(table), out)
    })
}

/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_state_table_len(table: *const TcStateTable) -> usize {
    // SAFETY: see contract.
    unsafe { table.as_ref() }.map_or(0, |t| t.0.len())
}

/// # Safety
/// `table` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_state_table_free(table: *mut TcStateTable) {
    unsafe { free_handle(table) }
}

fn wrap_forecast(inner: Forecast, table: &StateTable) -> Result<TcForecast, Failure> {
    let names = inner
        .states
        .iter()
        .map(|s| {
            CString::new(s.state.as_str()).map_err(|_| Failure::data("state name contains NUL"))
        })
        .collect::<Result<_, _>>()?;
    let ev = inner
        .states
        .iter()
        .map(|s| table.get(&s.state).map_or(0, |p| p.electoral_votes))
        .collect();
    Ok(TcForecast { inner, names, ev })
}

/// Forecast with twitter support `(e1, 1 - e1)`, Obama/Democrat first.
/// `model` is a [`TcModel`] value and `mode` a [`TcWeightMode`] value.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_run(
    table: *const TcStateTable,
    e1: f64,
    model: u32,
    mode: u32,
    out: *mut *mut TcForecast,
) -> TcStatus {
    guard(|| {
        let table = &non_null(table, "table")?.0;
        let support = TwitterSupport::fixed(e1)
            .map_err(|e| Failure(TcStatus::InvalidArgument, e.to_string()))?;
        let model = match model {
            m if m == TcModel::Baseline as u32 => ForecastModel::Baseline,
            m if m == TcModel::Model1 as u32 => ForecastModel::Model1,
            m if m == TcModel::Model2 as u32 => ForecastModel::Model2,
            m => {
                return Err(Failure(
                    TcStatus::InvalidArgument,
                    format!("unknown model {m}"),
                ))
            }
        };
        let mode = match mode {
            m if m == TcWeightMode::Normalized as u32 => WeightMode::Normalized,
            m if m == TcWeightMode::Literal as u32 => WeightMode::Literal,
            m => {
                return Err(Failure(
                    TcStatus::InvalidArgument,
                    format!("unknown weight mode {m}"),
                ))
            }
        };
        let f = tweetcast::forecast(table, &support, &PartyAlignment::default(), model, mode)
            .map_err(Failure::data)?;
        into_handle(wrap_forecast(f, table)?, out)
    })
}

/// Prior-only forecast.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_baseline(
    table: *const TcStateTable,
    out: *mut *mut TcForecast,
) -> TcStatus {
    guard(|| {
        let table = &non_null(table, "table")?.0;
        let f = tweetcast::baseline_forecast(table, &PartyAlignment::default())
            .map_err(Failure::data)?;
        into_handle(wrap_forecast(f, table)?, out)
    })
}

/// Writes the popular vote pair to `out[0..2]`.
///
/// # Safety
/// `f` must be a live handle; `out` must point to two doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_popular_vote(f: *const TcForecast, out: *mut f64) -> TcStatus {
    guard(|| {
        let f = non_null(f, "forecast")?;
        out_ptr(out, "out")?;
        // SAFETY: caller provides room for two values.
        unsafe { std::ptr::copy_nonoverlapping(f.inner.popular_vote.as_ptr(), out, 2) };
        Ok(())
    })
}

/// Electoral votes per candidate into `out[0..2]`; `tied` and `total` may be null.
///
/// # Safety
/// `f` must be a live handle; `out` must point to two integers.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_electoral_votes(
    f: *const TcForecast,
    out: *mut u64,
    tied: *mut u64,
    total: *mut u64,
) -> TcStatus {
    guard(|| {
        let f = non_null(f, "forecast")?;
        out_ptr(out, "out")?;
        // SAFETY: caller provides room for two values.
        unsafe { std::ptr::copy_nonoverlapping(f.inner.electoral_votes.as_ptr(), out, 2) };
        // SAFETY: optional outputs, null or valid.
        if let Some(t) = unsafe { tied.as_mut() } {
            *t = f.inner.tied_ev;
        }
        if let Some(t) = unsafe { total.as_mut() } {
            *t = f.inner.total_electoral_votes;
        }
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_state_count(f: *const TcForecast) -> usize {
    // SAFETY: see contract.
    unsafe { f.as_ref() }.map_or(0, |f| f.inner.states.len())
}

/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_state(
    f: *const TcForecast,
    index: usize,
    out: *mut TcStateShare,
) -> TcStatus {
    guard(|| {
        let f = non_null(f, "forecast")?;
        let s = f.inner.states.get(index).ok_or_else(|| {
            Failure(
                TcStatus::OutOfRange,
                format!("state index {index} >= {}", f.inner.states.len()),
            )
        })?;
        *out_ptr(out, "out")? = TcStateShare {
            share_1: s.share_1,
            share_2: s.share_2,
            margin: s.margin,
            winner: match s.winner {
                None => TcWinner::Tie,
                Some(Candidate::First) => TcWinner::First,
                Some(Candidate::Second) => TcWinner::Second,
            },
            electoral_votes: f.ev[index],
        };
        Ok(())
    })
}

/// State name at `index`, owned by the forecast; null when out of range.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_state_name(
    f: *const TcForecast,
    index: usize,
) -> *const c_char {
    // SAFETY: see contract.
    unsafe { f.as_ref() }
        .and_then(|f| f.names.get(index))
        .map_or(std::ptr::null(), |s| s.as_ptr())
}

/// Full forecast as JSON; free with `tc_string_free`.
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_to_json(
    f: *const TcForecast,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let f = non_null(f, "forecast")?;
        let json = serde_json::to_string(&f.inner).map_err(Failure::data)?;
        let c = CString::new(json).map_err(Failure::data)?;
        *out_ptr(out, "out")? = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn tc_forecast_free(f: *mut TcForecast) {
    unsafe { free_handle(f) }
}

/// `a / (a + b)` into `out`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_two_party_share(a: f64, b: f64, out: *mut f64) -> TcStatus {
    guard(|| {
        let (x, _) = tweetcast::two_party_share(a, b)
            .map_err(|e| Failure(TcStatus::InvalidArgument, e.to_string()))?;
        *out_ptr(out, "out")? = x;
        Ok(())
    })
}

/// Mean of `len` values.
///
/// # Safety
/// `values` must point to `len` doubles; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tc_mae(values: *const f64, len: usize, out: *mut f64) -> TcStatus {
    guard(|| {
        if len > 0 {
            non_null(values, "values")?;
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            // SAFETY: non-null, caller guarantees len elements.
            unsafe { std::slice::from_raw_parts(values, len) }
        };
        *out_ptr(out, "out")? =
            tweetcast::mae(slice).map_err(|e| Failure(TcStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}

/// Twitter support from per-candidate signal totals, optionally add-one
/// smoothed, into `out[0..2]`.
///
/// # Safety
/// `out` must point to two doubles.
#[no_mangle]
pub unsafe extern "C" fn tc_support_from_counts(
    x1: u64,
    x2: u64,
    smoothing: bool,
    out: *mut f64,
) -> TcStatus {
    guard(|| {
        let e = shares_from_signal([x1, x2], smoothing).ok_or_else(|| {
            Failure(
                TcStatus::InvalidArgument,
                "no signal: both counts are zero".into(),
            )
        })?;
        out_ptr(out, "out")?;
        // SAFETY: caller provides room for two values.
        unsafe { std::ptr::copy_nonoverlapping(e.as_ptr(), out, 2) };
        Ok(())
    })
}
