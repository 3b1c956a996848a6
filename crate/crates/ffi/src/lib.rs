//! C ABI over `ordinal-ineq`.
//!
//! Probability vectors and posterior draw sets are opaque handles created by
//! `oi_*_new`/`oi_*_draws` and released with the matching `_free`. Every
//! fallible call returns an [`OiStatus`]; on failure the message is available
//! from [`oi_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ordinal_ineq::comparison::{dominance_probabilities, summarize};
use ordinal_ineq::sampler::uniform_prior;
use ordinal_ineq::{
    cf_index, conjugate_draws, fsd_compare, gl_curve, gld_compare, headcount, index_posterior,
    j_index, restricted_fsd_compare, weighted_bootstrap_draws, CountData, Criterion,
    DominanceOutcome, Error, IndexKind, PosteriorDraws, ProbabilityVector, UGrid,
    WeightedMicrodata, WeightedRecord,
};

/// Opaque probability vector.
pub struct OiProbVec(ProbabilityVector);

/// Opaque set of posterior draws.
pub struct OiDraws(PosteriorDraws);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDimension = 2,
    DimensionMismatch = 3,
    Domain = 4,
    InvalidProbabilities = 5,
    InsufficientDraws = 6,
    DegenerateSample = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OiOutcome {
    Neither = 0,
    XDominates = 1,
    YDominates = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OiCriterion {
    Fsd = 0,
    RestrictedFsd = 1,
    Gld = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OiIndex {
    Headcount = 0,
    Jenkins = 1,
    /// Uses the `alpha` argument.
    CowellFlachaire = 2,
}

/// Posterior summary of one index.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OiSummary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> OiStatus {
    match err.root() {
        Error::InvalidDimension(_) => OiStatus::InvalidDimension,
        Error::DimensionMismatch { .. } => OiStatus::DimensionMismatch,
        Error::Domain(_) => OiStatus::Domain,
        Error::InvalidProbabilities(_) => OiStatus::InvalidProbabilities,
        Error::InsufficientDraws { .. } => OiStatus::InsufficientDraws,
        Error::DegenerateSample(_) => OiStatus::DegenerateSample,
        Error::Config(_) | Error::Parse { .. } => OiStatus::Config,
        Error::Io { .. } => OiStatus::Io,
        Error::Context { .. } => unreachable!("root strips context"),
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OiStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            OiStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".to_string());
            OiStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn writable<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn grid(step: f64) -> Result<UGrid, Fail> {
    Ok(UGrid::with_step(step)?)
}

fn outcome(o: DominanceOutcome) -> OiOutcome {
    match o {
        DominanceOutcome::XDominates => OiOutcome::XDominates,
        DominanceOutcome::YDominates => OiOutcome::YDominates,
        DominanceOutcome::Neither => OiOutcome::Neither,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn oi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Probability vector from `k` entries that sum to 1 within 1e-6.
///
/// # Safety
/// `p` must point to `k` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_probvec_new(
    p: *const f64,
    k: usize,
    out: *mut *mut OiProbVec,
) -> OiStatus {
    guard(|| {
        let dst = writable(out, "out")?;
        let v = ProbabilityVector::new(slice(p, k, "p")?.to_vec())?;
        *dst = Box::into_raw(Box::new(OiProbVec(v)));
        Ok(())
    })
}

/// Probability vector from nonnegative weights with a positive sum.
///
/// # Safety
/// `w` must point to `k` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_probvec_from_weights(
    w: *const f64,
    k: usize,
    out: *mut *mut OiProbVec,
) -> OiStatus {
    guard(|| {
        let dst = writable(out, "out")?;
        let v = ProbabilityVector::from_weights(slice(w, k, "w")?.to_vec())?;
        *dst = Box::into_raw(Box::new(OiProbVec(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must come from `oi_probvec_*` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn oi_probvec_free(v: *mut OiProbVec) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Number of categories, or 0 for null.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oi_probvec_len(v: *const OiProbVec) -> usize {
    v.as_ref().map_or(0, |v| v.0.k())
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_headcount(v: *const OiProbVec, out: *mut f64) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = headcount(&deref(v, "v")?.0)?;
        Ok(())
    })
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_j_index(v: *const OiProbVec, out: *mut f64) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = j_index(&deref(v, "v")?.0);
        Ok(())
    })
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_cf_index(v: *const OiProbVec, alpha: f64, out: *mut f64) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = cf_index(&deref(v, "v")?.0, alpha)?;
        Ok(())
    })
}

/// Generalized Lorenz curve at `u` in [0, 1].
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_gl_eval(v: *const OiProbVec, u: f64, out: *mut f64) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = gl_curve(&deref(v, "v")?.0).eval(u)?;
        Ok(())
    })
}

/// # Safety
/// `x`, `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_fsd_compare(
    x: *const OiProbVec,
    y: *const OiProbVec,
    out: *mut OiOutcome,
) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = outcome(fsd_compare(&deref(x, "x")?.0, &deref(y, "y")?.0)?);
        Ok(())
    })
}

/// # Safety
/// `x`, `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_restricted_fsd_compare(
    x: *const OiProbVec,
    y: *const OiProbVec,
    out: *mut OiOutcome,
) -> OiStatus {
    guard(|| {
        *writable(out, "out")? = outcome(restricted_fsd_compare(
            &deref(x, "x")?.0,
            &deref(y, "y")?.0,
        )?);
        Ok(())
    })
}

/// GL dominance on the grid `step, 2*step, ...` below 1 (0.01 gives 99 points).
///
/// # Safety
/// `x`, `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_gld_compare(
    x: *const OiProbVec,
    y: *const OiProbVec,
    grid_step: f64,
    out: *mut OiOutcome,
) -> OiStatus {
    guard(|| {
        let g = grid(grid_step)?;
        *writable(out, "out")? = outcome(gld_compare(&deref(x, "x")?.0, &deref(y, "y")?.0, &g)?);
        Ok(())
    })
}

/// `m` draws from Dirichlet(counts + prior). A null `prior` means
/// Dirichlet(1, ..., 1).
///
/// # Safety
/// `counts` must point to `k` values, `prior` to `k` doubles or be null;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_conjugate_draws(
    counts: *const u64,
    k: usize,
    prior: *const f64,
    m: usize,
    seed: u64,
    out: *mut *mut OiDraws,
) -> OiStatus {
    guard(|| {
        let dst = writable(out, "out")?;
        let data = CountData::new(slice(counts, k, "counts")?.to_vec())?;
        let prior = if prior.is_null() {
            uniform_prior(k)
        } else {
            slice(prior, k, "prior")?.to_vec()
        };
        let d = conjugate_draws(&data, &prior, m, seed)?;
        *dst = Box::into_raw(Box::new(OiDraws(d)));
        Ok(())
    })
}

/// `m` weighted Bayesian bootstrap draws over `n` records with 1-based
/// categories in `1..=k`.
///
/// # Safety
/// `categories` and `weights` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_weighted_bootstrap_draws(
    categories: *const u32,
    weights: *const f64,
    n: usize,
    k: usize,
    m: usize,
    seed: u64,
    out: *mut *mut OiDraws,
) -> OiStatus {
    guard(|| {
        let dst = writable(out, "out")?;
        let records = slice(categories, n, "categories")?
            .iter()
            .zip(slice(weights, n, "weights")?)
            .map(|(&c, &w)| WeightedRecord {
                category: c as usize,
                weight: w,
            })
            .collect();
        let data = WeightedMicrodata::new(records, k)?;
        let d = weighted_bootstrap_draws(&data, m, seed)?;
        *dst = Box::into_raw(Box::new(OiDraws(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must come from a draws constructor and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn oi_draws_free(d: *mut OiDraws) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of draws, or 0 for null.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oi_draws_count(d: *const OiDraws) -> usize {
    d.as_ref().map_or(0, |d| d.0.m())
}

/// Number of categories per draw, or 0 for null.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn oi_draws_categories(d: *const OiDraws) -> usize {
    d.as_ref().map_or(0, |d| d.0.k())
}

/// Copy draw `index` into `out`, which holds `len` doubles (`len` must equal
/// the category count).
///
/// # Safety
/// `d` must be a live handle; `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn oi_draws_row(
    d: *const OiDraws,
    index: usize,
    out: *mut f64,
    len: usize,
) -> OiStatus {
    guard(|| {
        let d = &deref(d, "d")?.0;
        if len != d.k() {
            return Err(Error::DimensionMismatch {
                what: "row buffer vs categories",
                left: len,
                right: d.k(),
            }
            .into());
        }
        let row = d.rows().get(index).ok_or_else(|| {
            Error::InvalidDimension(format!(
                "draw index {index} out of range for {} draws",
                d.m()
            ))
        })?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        ptr::copy_nonoverlapping(row.probs().as_ptr(), out, len);
        Ok(())
    })
}

/// Writes `[prob_x, prob_y, prob_none]` to `out`. `grid_step` is used by GLD
/// only.
///
/// # Safety
/// `x`, `y` must be live handles; `out` must have room for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn oi_dominance_probabilities(
    x: *const OiDraws,
    y: *const OiDraws,
    criterion: OiCriterion,
    grid_step: f64,
    out: *mut f64,
) -> OiStatus {
    guard(|| {
        let crit = match criterion {
            OiCriterion::Fsd => Criterion::Fsd,
            OiCriterion::RestrictedFsd => Criterion::RestrictedFsd,
            OiCriterion::Gld => Criterion::Gld,
        };
        let g = grid(grid_step)?;
        let r = dominance_probabilities(&deref(x, "x")?.0, &deref(y, "y")?.0, crit, &g)?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        ptr::copy_nonoverlapping([r.prob_x, r.prob_y, r.prob_none].as_ptr(), out, 3);
        Ok(())
    })
}

/// Posterior summary of an index over the draws. `alpha` is read for
/// `CowellFlachaire` only.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oi_index_summary(
    d: *const OiDraws,
    index: OiIndex,
    alpha: f64,
    out: *mut OiSummary,
) -> OiStatus {
    guard(|| {
        let kind = match index {
            OiIndex::Headcount => IndexKind::Headcount,
            OiIndex::Jenkins => IndexKind::Jenkins,
            OiIndex::CowellFlachaire => IndexKind::from_parts("CF", Some(alpha))?,
        };
        let s = summarize(&index_posterior(&deref(d, "d")?.0, kind)?)?;
        *writable(out, "out")? = OiSummary {
            mean: s.mean,
            sd: s.sd,
            q025: s.q025,
            median: s.median,
            q975: s.q975,
        };
        Ok(())
    })
}
