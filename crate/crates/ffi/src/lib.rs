//! C ABI over `quiver-findim`.
//!
//! Algebras live behind an opaque [`QfAlgebra`] handle. Every fallible call
//! returns a [`QfStatus`]; on failure the message is available from
//! [`qf_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`qf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quiver_findim::{findim, format, modules, Algebra, Error};

/// Status codes. The nonzero values match the exit codes of the
/// `quiver-findim` binary, except for the last two.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    InvalidArgument = 1,
    Parse = 2,
    NotAdmissible = 3,
    Certificate = 4,
    Invariant = 5,
    NullPointer = 6,
    Panic = 7,
}

/// A parsed and completed bound quiver algebra.
pub struct QfAlgebra {
    inner: Algebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QfStatus {
    match e.exit_code() {
        2 => QfStatus::Parse,
        3 => QfStatus::NotAdmissible,
        4 => QfStatus::Certificate,
        5 => QfStatus::Invariant,
        _ => QfStatus::InvalidArgument,
    }
}

fn fail(status: QfStatus, message: &str) -> QfStatus {
    set_last_error(message);
    status
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), QfStatus>) -> QfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QfStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: quiver_findim::Result<T>) -> Result<T, QfStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, QfStatus> {
    if p.is_null() {
        return Err(fail(QfStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(QfStatus::InvalidArgument, &format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(alg: *const QfAlgebra) -> Result<&'a Algebra, QfStatus> {
    alg.as_ref()
        .map(|a| &a.inner)
        .ok_or_else(|| fail(QfStatus::NullPointer, "algebra handle is null"))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), QfStatus> {
    if p.is_null() {
        Err(fail(QfStatus::NullPointer, &format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> Result<*mut c_char, QfStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(QfStatus::InvalidArgument, "output contains a nul byte"))
}

/// Parses an algebra description and computes its Gröbner basis.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle to be released with [`qf_algebra_free`].
#[no_mangle]
pub unsafe extern "C" fn qf_algebra_parse(text: *const c_char, out: *mut *mut QfAlgebra) -> QfStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let src = c_str(text, "text")?;
        let inner = lift(format::parse(src).and_then(|s| s.algebra()))?;
        *out = Box::into_raw(Box::new(QfAlgebra { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `alg` must come from [`qf_algebra_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qf_algebra_free(alg: *mut QfAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra over its field.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_algebra_dimension(alg: *const QfAlgebra, out: *mut usize) -> QfStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = handle(alg)?.dim();
        Ok(())
    })
}

/// Normal form of an element written in the input syntax.
///
/// # Safety
/// `alg` must be a live handle, `element` a nul-terminated string and `out`
/// a valid pointer. The string stored in `*out` is freed with
/// [`qf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qf_normal_form(
    alg: *const QfAlgebra,
    element: *const c_char,
    out: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let a = handle(alg)?;
        let z = lift(format::parse_element(a.quiver(), a.field(), c_str(element, "element")?))?;
        *out = c_string(a.render(&a.normal_form(&z)))?;
        Ok(())
    })
}

/// Projective dimension of `S<v>`, `P<v>` or `ideal:<arrow>`, resolving at
/// most `cutoff` steps. `*exact` is false when only the lower bound
/// `*value` is known.
///
/// # Safety
/// `alg` must be a live handle, `module` a nul-terminated string, `value`
/// and `exact` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qf_projective_dimension(
    alg: *const QfAlgebra,
    module: *const c_char,
    cutoff: usize,
    value: *mut usize,
    exact: *mut bool,
) -> QfStatus {
    guard(|| {
        out_ptr(value, "value")?;
        out_ptr(exact, "exact")?;
        let a = handle(alg)?;
        let m = lift(modules::named(a, c_str(module, "module")?))?;
        match lift(modules::pd(a, &m, cutoff))? {
            modules::ProjDim::Exact(n) => {
                *value = n;
                *exact = true;
            }
            modules::ProjDim::AtLeast(n) => {
                *value = n;
                *exact = false;
            }
        }
        Ok(())
    })
}

/// Runs the bound pipeline for `arrow` and writes the report as JSON.
/// A report without an upper bound is still `QF_STATUS_OK`; inspect its
/// `fpd_upper` field.
///
/// # Safety
/// `alg` must be a live handle, `arrow` a nul-terminated string and `out` a
/// valid pointer. The string stored in `*out` is freed with
/// [`qf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qf_bound_report_json(
    alg: *const QfAlgebra,
    arrow: *const c_char,
    cutoff: usize,
    out: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let a = handle(alg)?;
        let name = c_str(arrow, "arrow")?;
        let alpha = a
            .quiver()
            .arrow(name)
            .ok_or_else(|| fail(QfStatus::InvalidArgument, &format!("no arrow named {name}")))?;
        let report = lift(findim::main_bound(a, alpha, cutoff))?;
        let json = serde_json::to_string(&report).expect("serializable");
        *out = c_string(json)?;
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is accepted.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
