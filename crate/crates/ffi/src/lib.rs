//! C ABI over the `frlim` engine.
//!
//! Every handle is opaque and owned by the caller once returned; release it
//! with the matching `*_free` function. Fallible calls return an
//! [`FrlimStatus`] and write their result through an out-pointer that is left
//! untouched on failure. The message of the most recent failure on the calling
//! thread is available from [`frlim_last_error`].
//!
//! Strings returned through `char**` out-pointers are NUL-terminated UTF-8 and
//! must be released with [`frlim_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use frlim::error::Error;
use frlim::frcode::{parse, FrCode};
use frlim::intlin::Invariants;
use frlim::limits::{higher_limits, Caps, LimitOptions, LimitsReport, DEFAULT_SEED};
use frlim::permgrp::{resolve_group, GroupData, GroupSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrlimStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidGroup = 4,
    CapExceeded = 5,
    OutOfRange = 6,
    Malformed = 7,
    Precondition = 8,
    Internal = 9,
    Panic = 10,
}

/// A parsed fr-code.
pub struct FrlimCode(FrCode);

/// A finite permutation group with its presentation.
pub struct FrlimGroup(Arc<GroupData>);

/// The result of a higher-limit computation.
pub struct FrlimReport(LimitsReport);

/// Options for [`frlim_limits`]. Zero in `top_degree` or `truncation` selects
/// the default for the code.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FrlimOptions {
    pub top_degree: usize,
    pub truncation: usize,
    pub cap_elements: usize,
    pub cap_rank: usize,
    pub cap_seconds: u64,
    pub seed: u64,
    pub checks: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FrlimStatus {
    match e {
        Error::Syntax { .. } | Error::AlphabetMismatch(_) => FrlimStatus::Syntax,
        Error::InvalidGroup(_) | Error::Io(_) | Error::Json(_) => FrlimStatus::InvalidGroup,
        Error::CapExceeded(_) => FrlimStatus::CapExceeded,
        Error::IndexOutOfRange(_) => FrlimStatus::OutOfRange,
        Error::Malformed(_) | Error::RankMismatch(_) => FrlimStatus::Malformed,
        Error::Precondition(_) | Error::DepthInsufficient(_) | Error::Skipped(_) => FrlimStatus::Precondition,
        _ => FrlimStatus::Internal,
    }
}

fn fail(status: FrlimStatus, msg: impl Into<String>) -> FrlimStatus {
    set_error(msg);
    status
}

/// Runs `body`, converting engine errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), FrlimStatus>) -> FrlimStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrlimStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(FrlimStatus::Panic, msg)
        }
    }
}

fn engine<T>(r: frlim::Result<T>) -> Result<T, FrlimStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FrlimStatus> {
    if p.is_null() {
        return Err(fail(FrlimStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FrlimStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, FrlimStatus> {
    p.as_ref().ok_or_else(|| fail(FrlimStatus::NullArgument, "null handle"))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), FrlimStatus> {
    if out.is_null() {
        return Err(fail(FrlimStatus::NullArgument, "null out-pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> Result<(), FrlimStatus> {
    if out.is_null() {
        return Err(fail(FrlimStatus::NullArgument, "null out-pointer"));
    }
    let c = CString::new(s).map_err(|_| fail(FrlimStatus::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failure on this thread; empty if none. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn frlim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn frlim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frlim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_code_parse(text: *const c_char, out: *mut *mut FrlimCode) -> FrlimStatus {
    guard(|| {
        let code = engine(parse(read_str(text)?))?;
        store(out, FrlimCode(code))
    })
}

/// Canonical rendering of a code.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_code_render(code: *const FrlimCode, out: *mut *mut c_char) -> FrlimStatus {
    guard(|| store_string(out, deref(code)?.0.to_string()))
}

/// Smallest faithful truncation depth, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frlim_code_faithful_depth(code: *const FrlimCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.faithful_depth())
}

/// # Safety
/// `code` must be null or a handle from [`frlim_code_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frlim_code_free(code: *mut FrlimCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Opens a group from a spec file path or a bundled name such as `"z4"`.
/// `cap_elements` of 0 selects the default cap.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_group_open(spec: *const c_char, cap_elements: usize, out: *mut *mut FrlimGroup) -> FrlimStatus {
    guard(|| {
        let cap = if cap_elements == 0 { Caps::default().elements } else { cap_elements };
        let g = engine(resolve_group(read_str(spec)?, cap))?;
        store(out, FrlimGroup(Arc::new(g)))
    })
}

/// Builds a group from the text of a JSON spec.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_group_from_json(json: *const c_char, cap_elements: usize, out: *mut *mut FrlimGroup) -> FrlimStatus {
    guard(|| {
        let cap = if cap_elements == 0 { Caps::default().elements } else { cap_elements };
        let spec = engine(GroupSpec::from_json(read_str(json)?))?;
        let g = engine(GroupData::from_spec(&spec, cap))?;
        store(out, FrlimGroup(Arc::new(g)))
    })
}

/// Group order, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frlim_group_order(group: *const FrlimGroup) -> usize {
    group.as_ref().map_or(0, |g| g.0.order())
}

/// Number of generators, or 0 for a null handle.
///
/// # Safety
/// `group` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frlim_group_rank(group: *const FrlimGroup) -> usize {
    group.as_ref().map_or(0, |g| g.0.rank())
}

/// # Safety
/// `group` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frlim_group_free(group: *mut FrlimGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

#[no_mangle]
pub extern "C" fn frlim_options_default() -> FrlimOptions {
    let caps = Caps::default();
    FrlimOptions {
        top_degree: 0,
        truncation: 0,
        cap_elements: caps.elements,
        cap_rank: caps.rank,
        cap_seconds: caps.seconds,
        seed: DEFAULT_SEED,
        checks: false,
    }
}

/// Computes `lim^0..lim^T`. `options` may be null for the defaults.
///
/// # Safety
/// `code` and `group` must be live handles, `options` null or valid, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_limits(
    code: *const FrlimCode,
    group: *const FrlimGroup,
    options: *const FrlimOptions,
    out: *mut *mut FrlimReport,
) -> FrlimStatus {
    guard(|| {
        let (code, group) = (deref(code)?, deref(group)?);
        let o = options.as_ref().copied().unwrap_or_else(|| frlim_options_default());
        if o.cap_elements == 0 || o.cap_rank == 0 || o.cap_seconds == 0 {
            return Err(fail(FrlimStatus::Precondition, "caps must be positive"));
        }
        let opts = LimitOptions {
            top_degree: (o.top_degree > 0).then_some(o.top_degree),
            truncation: (o.truncation > 0).then_some(o.truncation),
            caps: Caps {
                elements: o.cap_elements,
                rank: o.cap_rank,
                seconds: o.cap_seconds,
            },
            checks: o.checks,
            seed: o.seed,
            ..LimitOptions::default()
        };
        let report = engine(higher_limits(&code.0, &group.0, &opts))?;
        store(out, FrlimReport(report))
    })
}

unsafe fn lim_at<'a>(report: *const FrlimReport, degree: usize) -> Result<&'a Invariants, FrlimStatus> {
    deref(report)?
        .0
        .lim(degree)
        .ok_or_else(|| fail(FrlimStatus::OutOfRange, format!("degree {degree} was not computed")))
}

/// Highest computed degree, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_top_degree(report: *const FrlimReport) -> usize {
    report
        .as_ref()
        .and_then(|r| r.0.lims.iter().map(|l| l.degree).max())
        .unwrap_or(0)
}

/// Truncation depth used, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_truncation(report: *const FrlimReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.truncation)
}

/// `lim^degree` in the notation `Z^2 + Z/2 + Z/4`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_lim(report: *const FrlimReport, degree: usize, out: *mut *mut c_char) -> FrlimStatus {
    guard(|| store_string(out, lim_at(report, degree)?.to_string()))
}

/// Free rank of `lim^degree`.
///
/// # Safety
/// `report` must be a live handle and `rank` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_lim_rank(report: *const FrlimReport, degree: usize, rank: *mut usize) -> FrlimStatus {
    guard(|| {
        let inv = lim_at(report, degree)?;
        if rank.is_null() {
            return Err(fail(FrlimStatus::NullArgument, "null out-pointer"));
        }
        *rank = inv.rank;
        Ok(())
    })
}

/// Torsion invariant factors of `lim^degree`. Writes up to `capacity` values
/// to `factors` (which may be null when `capacity` is 0) and the total count
/// to `count`.
///
/// # Safety
/// `report` must be a live handle, `factors` valid for `capacity` writes, and `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_lim_torsion(
    report: *const FrlimReport,
    degree: usize,
    factors: *mut u64,
    capacity: usize,
    count: *mut usize,
) -> FrlimStatus {
    guard(|| {
        let inv = lim_at(report, degree)?;
        if count.is_null() || (capacity > 0 && factors.is_null()) {
            return Err(fail(FrlimStatus::NullArgument, "null out-pointer"));
        }
        for (i, t) in inv.torsion.iter().take(capacity).enumerate() {
            let v = t
                .to_i64()
                .and_then(|v| u64::try_from(v).ok())
                .ok_or_else(|| fail(FrlimStatus::OutOfRange, format!("invariant factor {t} exceeds 64 bits")))?;
            *factors.add(i) = v;
        }
        *count = inv.torsion.len();
        Ok(())
    })
}

/// The report as pretty-printed JSON.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_json(report: *const FrlimReport, out: *mut *mut c_char) -> FrlimStatus {
    guard(|| {
        let json = serde_json::to_string_pretty(&deref(report)?.0).map_err(|e| fail(FrlimStatus::Internal, e.to_string()))?;
        store_string(out, json)
    })
}

/// # Safety
/// `report` must be null or a handle from [`frlim_limits`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn frlim_report_free(report: *mut FrlimReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

