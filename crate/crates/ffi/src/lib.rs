//! C ABI over certificate synthesis, parsing and verification.
//!
//! Certificates cross the boundary as opaque handles. Every function
//! returns an [`HtforgeStatus`]; on failure a message is available from
//! [`htforge_last_error_message`] on the same thread until the next call.
//! Strings handed out must be released with [`htforge_string_free`],
//! handles with [`htforge_certificate_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use htforge::certificate::Certificate;
use htforge::driver::{synthesize, SynthConfig};
use htforge::verify::verify_certificate;
use htforge::{Error, FactorSpec, Side};

/// Result of every call. The numeric values of `GateRejected`,
/// `VerificationFailed` and `BudgetExceeded` match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtforgeStatus {
    Ok = 0,
    InvalidArgument = 1,
    GateRejected = 2,
    VerificationFailed = 3,
    BudgetExceeded = 4,
    ParseError = 5,
    Internal = 6,
}

/// Opaque certificate handle.
pub struct HtforgeCertificate {
    inner: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> HtforgeStatus {
    match e {
        Error::TheoremGateViolation(_) | Error::UnsupportedPairing(_) => HtforgeStatus::GateRejected,
        Error::StepBudgetExceeded(_) | Error::NotFoundWithinBound { .. } => HtforgeStatus::BudgetExceeded,
        Error::Parse(_) => HtforgeStatus::ParseError,
        Error::InvalidFactor(_) | Error::InvalidArgument(_) | Error::Io(_) => HtforgeStatus::InvalidArgument,
        _ => HtforgeStatus::Internal,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (HtforgeStatus, String)>) -> HtforgeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HtforgeStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HtforgeStatus::Internal
        }
    }
}

fn engine_err(e: Error) -> (HtforgeStatus, String) {
    (status_of(&e), e.to_string())
}

fn bad_arg(msg: &str) -> (HtforgeStatus, String) {
    (HtforgeStatus::InvalidArgument, msg.to_string())
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn str_arg<'a>(s: *const c_char, name: &str) -> Result<&'a str, (HtforgeStatus, String)> {
    if s.is_null() {
        return Err(bad_arg(&format!("{name} is NULL")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| bad_arg(&format!("{name} is not UTF-8")))
}

/// # Safety
/// `cert` must be NULL or a handle from this library that was not freed.
unsafe fn cert_arg<'a>(cert: *const HtforgeCertificate) -> Result<&'a Certificate, (HtforgeStatus, String)> {
    cert.as_ref().map(|c| &c.inner).ok_or_else(|| bad_arg("certificate is NULL"))
}

/// Synthesizes a certificate for `G * H` with factor specs such as `c2`,
/// `c3` or `z`. On success `*out` receives a new handle.
///
/// # Safety
/// `g` and `h` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn htforge_synthesize(
    g: *const c_char,
    h: *const c_char,
    k_max: u32,
    word_len_max: u32,
    window: u32,
    out: *mut *mut HtforgeCertificate,
) -> HtforgeStatus {
    guard(|| {
        if out.is_null() {
            return Err(bad_arg("out is NULL"));
        }
        *out = ptr::null_mut();
        let g = FactorSpec::parse(Side::G, str_arg(g, "g")?).map_err(engine_err)?;
        let h = FactorSpec::parse(Side::H, str_arg(h, "h")?).map_err(engine_err)?;
        let cfg = SynthConfig {
            k_max: k_max as usize,
            word_len_max: word_len_max as usize,
            window: window as usize,
            ..SynthConfig::default()
        };
        let inner = synthesize(&g, &h, &cfg).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(HtforgeCertificate { inner }));
        Ok(())
    })
}

/// Parses certificate text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn htforge_certificate_parse(
    text: *const c_char,
    out: *mut *mut HtforgeCertificate,
) -> HtforgeStatus {
    guard(|| {
        if out.is_null() {
            return Err(bad_arg("out is NULL"));
        }
        *out = ptr::null_mut();
        let inner = Certificate::parse(str_arg(text, "text")?).map_err(engine_err)?;
        *out = Box::into_raw(Box::new(HtforgeCertificate { inner }));
        Ok(())
    })
}

/// Re-checks every witness. Returns `VerificationFailed` if any fails;
/// `failed`, when not NULL, receives the number of failing witnesses.
///
/// # Safety
/// `cert` must be a live handle; `failed` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn htforge_certificate_verify(
    cert: *const HtforgeCertificate,
    failed: *mut usize,
) -> HtforgeStatus {
    guard(|| {
        let report = verify_certificate(cert_arg(cert)?);
        let n = report.failures().count();
        if let Some(f) = failed.as_mut() {
            *f = n;
        }
        if report.passed() {
            Ok(())
        } else {
            let first = report
                .structural
                .first()
                .cloned()
                .or_else(|| report.failures().next().and_then(|f| f.error.clone()))
                .unwrap_or_default();
            Err((HtforgeStatus::VerificationFailed, format!("{n} witnesses failed: {first}")))
        }
    })
}

/// Serializes the certificate; release the text with
/// [`htforge_string_free`].
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn htforge_certificate_to_string(
    cert: *const HtforgeCertificate,
    out: *mut *mut c_char,
) -> HtforgeStatus {
    guard(|| {
        if out.is_null() {
            return Err(bad_arg("out is NULL"));
        }
        *out = ptr::null_mut();
        let text = cert_arg(cert)?.to_text();
        *out = CString::new(text).map_err(|_| bad_arg("certificate text contains NUL"))?.into_raw();
        Ok(())
    })
}

/// Number of witnesses, or 0 for a NULL handle.
///
/// # Safety
/// `cert` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn htforge_certificate_witness_count(cert: *const HtforgeCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.inner.entries.len())
}

/// # Safety
/// `cert` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn htforge_certificate_free(cert: *mut HtforgeCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn htforge_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn htforge_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}
