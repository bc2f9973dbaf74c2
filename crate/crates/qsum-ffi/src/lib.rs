//! C ABI for the qsum identity verification engine.
//!
//! Conventions, uniform across every entry point:
//!
//! * Every fallible function returns a [`QsumStatus`]; `Ok` is `0`.
//!   Status codes describe whether the *call* could run. Mathematical
//!   outcomes — a divergent series, a residual above tolerance — are
//!   data, reported inside the returned JSON, not as status codes.
//! * Strings handed out through `out` parameters are NUL-terminated
//!   UTF-8 allocated by this library; release them with
//!   [`qsum_string_free`]. On any non-`Ok` status the `out` string is
//!   set to null.
//! * After a non-`Ok` status, [`qsum_last_error_message`] returns a
//!   human-readable detail message (per thread).
//! * A [`QsumContext`] is immutable after creation and safe to share
//!   across threads.
//! * Panics never unwind across the boundary: they are caught and
//!   surfaced as [`QsumStatus::Panic`].
//!
//! Numeric values cross the boundary as decimal *strings*, never as
//! `double`: the engine works at tens to hundreds of digits, and a
//! machine float would silently truncate both inputs and outputs.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qsum::identities::{IdentityCase, IdentityId};
use qsum::report::{self, Evaluation, Side};
use qsum::verifier::Profile;
use qsum::{make_context, Complex, Error, PrecisionContext};

/// Status code returned by every fallible entry point.
///
/// `qsum_status_name` maps a code to a short static name.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsumStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The requested precision is below the supported minimum (20).
    InvalidDigits = 3,
    /// No identity is registered under the given name.
    UnknownIdentity = 4,
    /// No limit edge is registered under the given name.
    UnknownEdge = 5,
    /// A parameter was missing, malformed, duplicated, or not in an
    /// identity's schema.
    InvalidParam = 6,
    /// The parameter point hits a pole of a series term or closed form.
    Pole = 7,
    /// The parameter point violates the identity's domain.
    Domain = 8,
    /// Rejection sampling could not produce the requested cases.
    Sampling = 9,
    /// The library panicked internally; free the context and report a
    /// bug.
    Panic = 10,
}

/// Opaque evaluation context fixing the working precision. Create with
/// `qsum_context_new`, release with `qsum_context_free`. Immutable
/// after creation and safe to share across threads.
pub struct QsumContext {
    ctx: PrecisionContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn set_last_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

/// Maps a library error to its status code and records its message.
fn fail(e: &Error) -> QsumStatus {
    set_last_error(&e.to_string());
    match e {
        Error::InvalidDigits(_) => QsumStatus::InvalidDigits,
        Error::Pole(_) => QsumStatus::Pole,
        Error::Domain(_) => QsumStatus::Domain,
        Error::UnknownIdentity(_) => QsumStatus::UnknownIdentity,
        Error::UnknownEdge(_) => QsumStatus::UnknownEdge,
        Error::Param(_) => QsumStatus::InvalidParam,
        Error::Sampling { .. } => QsumStatus::Sampling,
    }
}

/// Runs `f` with panics caught, so nothing ever unwinds into C. The
/// `AssertUnwindSafe` is sound because no entry point observes state
/// that a previous panicking call could have left half-updated: every
/// call re-derives what it needs, and the context's interior caches are
/// behind poisoning mutexes.
fn guarded(f: impl FnOnce() -> QsumStatus) -> QsumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let detail = if let Some(s) = payload.downcast_ref::<&str>() {
                s
            } else if let Some(s) = payload.downcast_ref::<String>() {
                s.as_str()
            } else {
                "unknown cause"
            };
            set_last_error(&format!("internal panic: {detail}"));
            QsumStatus::Panic
        }
    }
}

/// Reads a borrowed C string argument, recording the failure mode.
///
/// # Safety
/// `p`, when non-null, must point to a NUL-terminated string valid for
/// the duration of the call.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, QsumStatus> {
    if p.is_null() {
        set_last_error(&format!("{what} is null"));
        return Err(QsumStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        QsumStatus::InvalidUtf8
    })
}

/// Borrows the context behind a handle.
///
/// # Safety
/// `p`, when non-null, must be a live handle from `qsum_context_new`.
unsafe fn read_ctx<'a>(p: *const QsumContext) -> Result<&'a PrecisionContext, QsumStatus> {
    if p.is_null() {
        set_last_error("ctx is null");
        return Err(QsumStatus::NullPointer);
    }
    Ok(&unsafe { &*p }.ctx)
}

/// Clears `*out` and returns it as a place to write on success.
///
/// # Safety
/// `out`, when non-null, must be valid for writing one pointer.
unsafe fn open_out(out: *mut *mut c_char) -> Result<(), QsumStatus> {
    if out.is_null() {
        set_last_error("out is null");
        return Err(QsumStatus::NullPointer);
    }
    unsafe { *out = ptr::null_mut() };
    Ok(())
}

/// Hands `text` to the caller through `out`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
unsafe fn write_out(out: *mut *mut c_char, text: String) -> QsumStatus {
    match CString::new(text) {
        Ok(owned) => {
            unsafe { *out = owned.into_raw() };
            QsumStatus::Ok
        }
        Err(_) => {
            // JSON built from NUL-free inputs cannot contain NUL; if it
            // ever does, an invariant broke inside the library.
            set_last_error("output contained an interior NUL byte");
            QsumStatus::Panic
        }
    }
}

/// Parses the eval parameter object: JSON mapping each schema parameter
/// name to a decimal string, e.g. `{"q":"0.3","a":"0.2+0.1i"}`.
fn parse_params_json(
    text: &str,
    ctx: &PrecisionContext,
) -> qsum::Result<BTreeMap<String, Complex>> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Param(format!("params is not valid JSON: {e}")))?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Param("params must be a JSON object".to_string()))?;
    let mut map = BTreeMap::new();
    for (name, v) in object {
        let s = v.as_str().ok_or_else(|| {
            Error::Param(format!(
                "value of `{name}` must be a decimal string; \
                 a JSON number would pass through machine floating point \
                 and silently limit precision"
            ))
        })?;
        let parsed = Complex::parse(s, ctx)
            .map_err(|_| Error::Param(format!("cannot parse value of `{name}`: `{s}`")))?;
        map.insert(name.clone(), parsed);
    }
    Ok(map)
}

/// Creates an evaluation context with the given working precision in
/// decimal digits (minimum 20) and writes the handle to `out`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_context_new(digits: u32, out: *mut *mut QsumContext) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        if out.is_null() {
            set_last_error("out is null");
            return QsumStatus::NullPointer;
        }
        unsafe { *out = ptr::null_mut() };
        match make_context(digits) {
            Ok(ctx) => {
                unsafe { *out = Box::into_raw(Box::new(QsumContext { ctx })) };
                QsumStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a context created by `qsum_context_new`. `ctx` may be null.
///
/// # Safety
/// `ctx` must be null or a handle from `qsum_context_new` that has not
/// been freed already, with no other thread still using it.
#[no_mangle]
pub unsafe extern "C" fn qsum_context_free(ctx: *mut QsumContext) {
    if !ctx.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(ctx) })));
    }
}

/// Returns the context's working precision in decimal digits, or 0 when
/// `ctx` is null.
///
/// # Safety
/// `ctx` must be null or a live handle from `qsum_context_new`.
#[no_mangle]
pub unsafe extern "C" fn qsum_context_digits(ctx: *const QsumContext) -> u32 {
    if ctx.is_null() {
        return 0;
    }
    unsafe { &*ctx }.ctx.digits()
}

/// Writes the JSON catalog of every identity — an array of
/// `{"name", "title"}` objects — to `out`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_identities_json(out: *mut *mut c_char) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        match unsafe { open_out(out) } {
            Ok(()) => unsafe { write_out(out, report::list_json()) },
            Err(status) => status,
        }
    })
}

/// Writes the JSON description of one identity — both sides, parameter
/// schema, domain conditions — to `out`.
///
/// # Safety
/// `identity` must be a NUL-terminated string; `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_describe_json(
    identity: *const c_char,
    out: *mut *mut c_char,
) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        if let Err(status) = unsafe { open_out(out) } {
            return status;
        }
        let name = match unsafe { read_str(identity, "identity") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match IdentityId::from_name(name) {
            Ok(id) => unsafe { write_out(out, report::describe_json(id)) },
            Err(e) => fail(&e),
        }
    })
}

/// Evaluates both sides of `identity` at one parameter point and writes
/// the evaluation report to `out` — the same JSON object the CLI's
/// `eval --json` prints (series value, status, terms used, tail
/// estimate, closed form, residual).
///
/// `params_json` is a JSON object mapping each schema parameter to a
/// decimal string, e.g. `{"q":"0.3","a":"0.2+0.1i"}`. Values must be
/// strings, not JSON numbers — numbers would pass through machine
/// floating point and silently limit the attainable precision.
///
/// Divergence is not an error status: the call returns `Ok` and the
/// report's `"status"` field says `"diverging"`.
///
/// # Safety
/// `ctx` must be a live handle from `qsum_context_new`; `identity` and
/// `params_json` must be NUL-terminated strings; `out` must be valid
/// for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_eval_json(
    ctx: *const QsumContext,
    identity: *const c_char,
    params_json: *const c_char,
    out: *mut *mut c_char,
) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        if let Err(status) = unsafe { open_out(out) } {
            return status;
        }
        let ctx = match unsafe { read_ctx(ctx) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        let name = match unsafe { read_str(identity, "identity") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let params_text = match unsafe { read_str(params_json, "params_json") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let result = (|| {
            let id = IdentityId::from_name(name)?;
            let case = IdentityCase::new(id, parse_params_json(params_text, ctx)?)?;
            let eval = Evaluation::compute(&case, Side::Both, ctx)?;
            qsum::Result::Ok(eval.to_json(&case, ctx))
        })();
        match result {
            Ok(text) => unsafe { write_out(out, text) },
            Err(e) => fail(&e),
        }
    })
}

/// Runs a seeded verification sweep and writes the report JSON to
/// `out`. `identity` is a catalog name, or `"all"` for every identity
/// (the output is then a JSON array, one report per identity, each with
/// its own derived seed). `complex_profile` draws parameters with small
/// imaginary parts instead of real values. Output is byte-identical
/// across calls with identical arguments.
///
/// # Safety
/// `ctx` must be a live handle from `qsum_context_new`; `identity` must
/// be a NUL-terminated string; `out` must be valid for writing one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_verify_json(
    ctx: *const QsumContext,
    identity: *const c_char,
    count: usize,
    seed: u64,
    complex_profile: bool,
    out: *mut *mut c_char,
) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        if let Err(status) = unsafe { open_out(out) } {
            return status;
        }
        let ctx = match unsafe { read_ctx(ctx) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        let name = match unsafe { read_str(identity, "identity") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let profile = if complex_profile {
            Profile::Complex
        } else {
            Profile::Real
        };
        match report::run_verify(name, count, seed, profile, false, ctx) {
            Ok(reports) => unsafe { write_out(out, report::reports_json(&reports)) },
            Err(e) => fail(&e),
        }
    })
}

/// Runs a limit study along `edge` (for example `"thm2:prop41"`) and
/// writes the report JSON to `out`. `schedule` is an optional
/// comma-separated list of values for the edge's varying parameter;
/// pass null for the edge's default schedule.
///
/// # Safety
/// `ctx` must be a live handle from `qsum_context_new`; `edge` must be
/// a NUL-terminated string and `schedule` null or NUL-terminated; `out`
/// must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn qsum_limits_json(
    ctx: *const QsumContext,
    edge: *const c_char,
    schedule: *const c_char,
    out: *mut *mut c_char,
) -> QsumStatus {
    guarded(|| {
        clear_last_error();
        if let Err(status) = unsafe { open_out(out) } {
            return status;
        }
        let ctx = match unsafe { read_ctx(ctx) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        let edge_name = match unsafe { read_str(edge, "edge") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let schedule_text = if schedule.is_null() {
            None
        } else {
            match unsafe { read_str(schedule, "schedule") } {
                Ok(s) => Some(s),
                Err(status) => return status,
            }
        };
        match report::run_limits(edge_name, schedule_text, false, ctx) {
            Ok(report) => unsafe { write_out(out, report.to_json()) },
            Err(e) => fail(&e),
        }
    })
}

/// Frees a string returned by this library. `s` may be null.
///
/// # Safety
/// `s` must be null or a string obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn qsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Returns the detail message recorded by the most recent failing call
/// on this thread, or null when the most recent call succeeded. The
/// caller owns the returned copy and must release it with
/// `qsum_string_free`.
#[no_mangle]
pub extern "C" fn qsum_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Returns a short static name for a status code (`"ok"`,
/// `"unknown-identity"`, ...), or `"unknown-status"` for values outside
/// the enum. Never free the result.
#[no_mangle]
pub extern "C" fn qsum_status_name(status: u32) -> *const c_char {
    // Accepts a raw integer rather than `QsumStatus` because a C caller
    // can pass any value, and an out-of-range Rust enum is undefined
    // behavior before the function body even runs.
    let name: &'static CStr = match status {
        0 => c"ok",
        1 => c"null-pointer",
        2 => c"invalid-utf8",
        3 => c"invalid-digits",
        4 => c"unknown-identity",
        5 => c"unknown-edge",
        6 => c"invalid-param",
        7 => c"pole",
        8 => c"domain",
        9 => c"sampling",
        10 => c"panic",
        _ => c"unknown-status",
    };
    name.as_ptr()
}

/// Returns the library version as a static string. Never free the
/// result.
#[no_mangle]
pub extern "C" fn qsum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
