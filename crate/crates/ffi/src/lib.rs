//! C ABI over `hilbconf`.
//!
//! Enrichments are passed as opaque handles; every other result is returned
//! as a JSON string owned by the caller and released with
//! [`hc_string_free`]. Each function returns an [`HcStatus`]; on failure
//! [`hc_last_error`] describes the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hilbconf::charts::{self, ChartTarget, WMode};
use hilbconf::classify;
use hilbconf::cli::parse_enrichment;
use hilbconf::poly::{colon_ideal, Budget, Ideal, MonomialOrder, VarTable};
use hilbconf::symmetry::{acting_group, pointwise_stabilizer_h, stabilizer_g};
use hilbconf::Enrichment;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    Panic = 5,
}

/// An enrichment owned by the library.
pub struct HcEnrichment {
    inner: Enrichment,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn fail(status: HcStatus, message: impl Into<String>) -> HcStatus {
    set_error(message);
    status
}

/// Runs `body`, converting panics into [`HcStatus::Panic`].
fn guard(body: impl FnOnce() -> HcStatus) -> HcStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(HcStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HcStatus> {
    if p.is_null() {
        return Err(fail(HcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HcStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> HcStatus {
    if out.is_null() {
        return fail(HcStatus::NullPointer, "null output pointer");
    }
    let text = CString::new(value.to_string()).expect("json has no interior nul");
    *out = text.into_raw();
    HcStatus::Ok
}

unsafe fn handle<'a>(h: *const HcEnrichment) -> Result<&'a Enrichment, HcStatus> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| fail(HcStatus::NullPointer, "null enrichment handle"))
}

/// Parses compact notation (`R^{3,123}_{3,12,123}`) or JSON over `{1..n}`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_enrichment_parse(text: *const c_char, n: u32, out: *mut *mut HcEnrichment) -> HcStatus {
    guard(|| {
        if out.is_null() {
            return fail(HcStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_enrichment(text, n) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HcEnrichment { inner }));
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `h` must come from [`hc_enrichment_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hc_enrichment_free(h: *mut HcEnrichment) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `{"n": …, "structures": […]}`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_enrichment_to_json(h: *const HcEnrichment, out: *mut *mut c_char) -> HcStatus {
    guard(|| match handle(h) {
        Ok(eta) => write_json(out, &eta.to_json()),
        Err(s) => s,
    })
}

/// Classification report of one enrichment.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_classify(h: *const HcEnrichment, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        let eta = match handle(h) {
            Ok(e) => e,
            Err(s) => return s,
        };
        match classify::classify(eta) {
            Ok(report) => write_json(out, &report.to_json()),
            Err(e) => fail(HcStatus::DomainError, e.to_string()),
        }
    })
}

/// `{"G": …, "H": …, "acting": label}`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_groups(h: *const HcEnrichment, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        let eta = match handle(h) {
            Ok(e) => e,
            Err(s) => return s,
        };
        let value = serde_json::json!({
            "G": stabilizer_g(eta),
            "H": pointwise_stabilizer_h(eta),
            "acting": acting_group(eta).label,
        });
        write_json(out, &value)
    })
}

/// Summary of classifying every enrichment up to `max_level`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_classify_all(n: u32, max_level: u32, out: *mut *mut c_char) -> HcStatus {
    guard(|| match classify::classify_all(n, max_level as usize) {
        Ok(summary) => write_json(out, &serde_json::to_value(&summary).expect("serializes")),
        Err(e) => fail(HcStatus::DomainError, e.to_string()),
    })
}

/// Chart verification report; `mode` is `substituted` or `symbolic-w`.
///
/// # Safety
/// `target` and `mode` must be valid strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_chart(
    target: *const c_char,
    dim: u32,
    mode: *const c_char,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        let (target, mode) = match (read_str(target), read_str(mode)) {
            (Ok(t), Ok(m)) => (t, m),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let target: ChartTarget = match target.parse() {
            Ok(t) => t,
            Err(e) => return fail(HcStatus::ParseError, format!("{e}")),
        };
        let mode: WMode = match mode.parse() {
            Ok(m) => m,
            Err(e) => return fail(HcStatus::ParseError, e),
        };
        match charts::verify_chart(target, dim as usize, mode) {
            Ok(report) => write_json(out, &report.to_json()),
            Err(e) => fail(HcStatus::DomainError, e.to_string()),
        }
    })
}

/// The colon ideal `(ideal : by)`; `vars`, `ideal` and `by` are
/// comma-separated lists.
///
/// # Safety
/// All string arguments must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_colon_ideal(
    vars: *const c_char,
    ideal: *const c_char,
    by: *const c_char,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        let (vars, ideal, by) = match (read_str(vars), read_str(ideal), read_str(by)) {
            (Ok(v), Ok(i), Ok(b)) => (v, i, b),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        let list = |s: &str| s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect::<Vec<_>>();
        let parsed = VarTable::new("ffi", &list(vars))
            .and_then(|t| Ok((Ideal::parse(t.clone(), &list(ideal))?, Ideal::parse(t.clone(), &list(by))?, t)));
        let (i, j, table) = match parsed {
            Ok(x) => x,
            Err(e) => return fail(HcStatus::ParseError, e.to_string()),
        };
        let order = MonomialOrder::graded_lex((0..table.len()).collect());
        match colon_ideal(&i.gens, &j.gens, &order, &Budget::default()) {
            Ok(gens) => write_json(out, &Ideal::new(table, gens).to_json()),
            Err(e) => fail(HcStatus::DomainError, e.to_string()),
        }
    })
}

/// Message for the last failure on this thread, or null. The caller owns
/// the returned string.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
