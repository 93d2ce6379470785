//! C ABI for the monoreg library.
//!
//! Conventions:
//! - Ideals are opaque handles created by [`monoreg_ideal_parse`] and
//!   released with [`monoreg_ideal_free`].
//! - Every fallible call returns a [`MonoregStatus`]; results come back
//!   through out-pointers that are written only on `MONOREG_STATUS_OK`.
//! - Strings returned through out-pointers are NUL-terminated, owned by the
//!   caller, and must be released with [`monoreg_string_free`].
//! - On failure, [`monoreg_last_error_message`] returns a thread-local
//!   message valid until the next failing call on the same thread.
//! - All entry points catch panics; a panic is reported as
//!   `MONOREG_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use monoreg::homology::Field;
use monoreg::ideal::MonomialIdeal;
use monoreg::verify::{classify_flags, verify_conjecture, VerifyOptions};
use monoreg::{newton, Error};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoregStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input could not be parsed as an ideal or monomial.
    ParseError = 3,
    /// The operation is undefined for this input (zero or unit ideal,
    /// wrong class, dimension mismatch).
    UndefinedInput = 4,
    /// The computation would overflow or exceed the supported size.
    TooLarge = 5,
    /// An internal invariant failed.
    Internal = 6,
}

/// Opaque handle to a canonical monomial ideal.
pub struct MonoregIdeal(MonomialIdeal);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NULs stripped");
    });
}

fn status_for(error: &Error) -> MonoregStatus {
    match error {
        Error::Parse(_) | Error::InvalidFamilySpec(_) | Error::InvalidBlocks(_) => {
            MonoregStatus::ParseError
        }
        Error::Overflow | Error::TooLarge(_) => MonoregStatus::TooLarge,
        Error::FastPathMismatch(_) => MonoregStatus::Internal,
        _ => MonoregStatus::UndefinedInput,
    }
}

fn fail(error: &Error) -> MonoregStatus {
    set_last_error(&error.to_string());
    status_for(error)
}

/// Run a closure at the FFI boundary, converting panics into `Internal`.
fn guarded(f: impl FnOnce() -> MonoregStatus) -> MonoregStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&message);
            MonoregStatus::Internal
        }
    }
}

unsafe fn read_utf8<'a>(input: *const c_char) -> Result<&'a str, MonoregStatus> {
    if input.is_null() {
        set_last_error("input pointer is NULL");
        return Err(MonoregStatus::NullPointer);
    }
    CStr::from_ptr(input).to_str().map_err(|_| {
        set_last_error("input is not valid UTF-8");
        MonoregStatus::InvalidUtf8
    })
}

unsafe fn deref_ideal<'a>(handle: *const MonoregIdeal) -> Result<&'a MonomialIdeal, MonoregStatus> {
    if handle.is_null() {
        set_last_error("ideal handle is NULL");
        return Err(MonoregStatus::NullPointer);
    }
    Ok(&(*handle).0)
}

fn write_string(out: *mut *mut c_char, value: String) -> MonoregStatus {
    let sanitized = value.replace('\0', " ");
    let boxed = CString::new(sanitized).expect("NULs stripped").into_raw();
    unsafe { *out = boxed };
    MonoregStatus::Ok
}

macro_rules! require_out {
    ($out:expr) => {
        if $out.is_null() {
            set_last_error("output pointer is NULL");
            return MonoregStatus::NullPointer;
        }
    };
}

/// Last error message for this thread. Never NULL; valid until the next
/// failing call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn monoreg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse an ideal from the text format (`x^2, x*y^2, y^3`) or the
/// canonical JSON form. The result is minimalized and canonically sorted.
///
/// # Safety
/// `input` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_parse(
    input: *const c_char,
    out: *mut *mut MonoregIdeal,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let text = match read_utf8(input) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match MonomialIdeal::parse(text) {
            Ok(ideal) => {
                *out = Box::into_raw(Box::new(MonoregIdeal(ideal)));
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release an ideal handle. NULL is a no-op.
///
/// # Safety
/// `handle` must be NULL or a pointer from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_free(handle: *mut MonoregIdeal) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string pointer from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn monoreg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical JSON form of the ideal.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_to_json(
    handle: *const MonoregIdeal,
    out: *mut *mut c_char,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        match deref_ideal(handle) {
            Ok(ideal) => write_string(out, ideal.to_canonical_json()),
            Err(status) => status,
        }
    })
}

/// Ambient number of variables.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_dimension(
    handle: *const MonoregIdeal,
    out: *mut usize,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        match deref_ideal(handle) {
            Ok(ideal) => {
                *out = ideal.dimension();
                MonoregStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Number of minimal generators.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_num_gens(
    handle: *const MonoregIdeal,
    out: *mut usize,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        match deref_ideal(handle) {
            Ok(ideal) => {
                *out = ideal.num_gens();
                MonoregStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Integral closure as a new handle.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_closure(
    handle: *const MonoregIdeal,
    out: *mut *mut MonoregIdeal,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match newton::integral_closure(ideal) {
            Ok(closure) => {
                *out = Box::into_raw(Box::new(MonoregIdeal(closure)));
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Whether the ideal equals its integral closure.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_is_integrally_closed(
    handle: *const MonoregIdeal,
    out: *mut bool,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match newton::is_integrally_closed(ideal) {
            Ok(value) => {
                *out = value;
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Maximum corner-point degree of the Newton polyhedron.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_delta(
    handle: *const MonoregIdeal,
    out: *mut u64,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match newton::delta(ideal) {
            Ok(value) => {
                *out = value;
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Height (codimension) of the ideal.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_height(
    handle: *const MonoregIdeal,
    out: *mut usize,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match ideal.height() {
            Ok(value) => {
                *out = value;
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Castelnuovo-Mumford regularity of the ideal over the rationals.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_regularity(
    handle: *const MonoregIdeal,
    out: *mut i64,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match monoreg::betti::multigraded_betti(ideal, Field::Q) {
            Ok(table) => {
                *out = table.ideal_regularity();
                MonoregStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Classification flags as a JSON object string.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_ideal_classify_json(
    handle: *const MonoregIdeal,
    out: *mut *mut c_char,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        match classify_flags(ideal, Field::Q) {
            Ok(flags) => write_string(
                out,
                serde_json::to_string(&flags).expect("flags serialize"),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Full verification record as a JSON string, checking the power bounds
/// for `m = 1..=hoa_max`.
///
/// # Safety
/// `handle` must be a live ideal handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn monoreg_verify_json(
    handle: *const MonoregIdeal,
    hoa_max: u64,
    out: *mut *mut c_char,
) -> MonoregStatus {
    guarded(|| {
        require_out!(out);
        let ideal = match deref_ideal(handle) {
            Ok(i) => i,
            Err(status) => return status,
        };
        let opts = VerifyOptions {
            hoa_max,
            ..VerifyOptions::default()
        };
        match verify_conjecture(ideal, &opts) {
            Ok(record) => write_string(
                out,
                serde_json::to_string(&record).expect("record serializes"),
            ),
            Err(e) => fail(&e),
        }
    })
}
