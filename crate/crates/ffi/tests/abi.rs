use std::ffi::{c_char, CStr, CString};
use std::ptr;

use quiver_findim::corpus;
use quiver_findim_ffi::*;

const A2: &str = "field Q\nquiver\n  vertex 1\n  vertex 2\n  arrow a 1 2\nend\norder lenlex\nrelations\nend\n";

fn parse(text: &str) -> (QfStatus, *mut QfAlgebra) {
    let c = CString::new(text).unwrap();
    let mut alg = ptr::null_mut();
    let status = unsafe { qf_algebra_parse(c.as_ptr(), &mut alg) };
    (status, alg)
}

fn last_error() -> String {
    let p = qf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    qf_string_free(s);
    owned
}

#[test]
fn a2_dimension_and_projectives() {
    let (status, alg) = parse(A2);
    assert_eq!(status, QfStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { qf_algebra_dimension(alg, &mut dim) }, QfStatus::Ok);
    assert_eq!(dim, 3);
    let (mut value, mut exact) = (99, false);
    let module = CString::new("S1").unwrap();
    let status = unsafe { qf_projective_dimension(alg, module.as_ptr(), 5, &mut value, &mut exact) };
    assert_eq!(status, QfStatus::Ok);
    assert_eq!((value, exact), (1, true));
    let module = CString::new("S2").unwrap();
    unsafe { qf_projective_dimension(alg, module.as_ptr(), 5, &mut value, &mut exact) };
    assert_eq!((value, exact), (0, true));
    unsafe { qf_algebra_free(alg) };
}

#[test]
fn normal_form_uses_the_relations() {
    let (_, alg) = parse(corpus::text("exam2").unwrap());
    let elem = CString::new("gamma2*delta2").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qf_normal_form(alg, elem.as_ptr(), &mut out) }, QfStatus::Ok);
    assert_eq!(unsafe { take(out) }, "gamma1*delta1");
    unsafe { qf_algebra_free(alg) };
}

#[test]
fn bound_report_is_json() {
    let (_, alg) = parse(corpus::text("exam2").unwrap());
    let arrow = CString::new("alpha").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qf_bound_report_json(alg, arrow.as_ptr(), 12, &mut out) },
        QfStatus::Ok
    );
    let report: serde_json::Value = serde_json::from_str(&unsafe { take(out) }).unwrap();
    assert_eq!(report["fpd_upper"], 9);
    assert_eq!(report["fpd_lower"], 1);
    unsafe { qf_algebra_free(alg) };
}

#[test]
fn errors_set_status_and_message() {
    let (status, alg) = parse("field Q\nquiver\n  arrow a 1 2\n");
    assert_eq!(status, QfStatus::Parse);
    assert!(alg.is_null());
    assert!(!last_error().is_empty());

    let (_, alg) = parse(A2);
    let module = CString::new("S7").unwrap();
    let (mut value, mut exact) = (0, false);
    let status = unsafe { qf_projective_dimension(alg, module.as_ptr(), 5, &mut value, &mut exact) };
    assert_eq!(status, QfStatus::InvalidArgument);
    assert!(last_error().contains('7'));

    let mut dim = 0;
    assert_eq!(unsafe { qf_algebra_dimension(alg, &mut dim) }, QfStatus::Ok);
    assert!(qf_last_error_message().is_null());
    unsafe { qf_algebra_free(alg) };
}

#[test]
fn null_pointers_are_rejected() {
    let mut alg = ptr::null_mut();
    assert_eq!(
        unsafe { qf_algebra_parse(ptr::null(), &mut alg) },
        QfStatus::NullPointer
    );
    let mut dim = 0;
    assert_eq!(
        unsafe { qf_algebra_dimension(ptr::null(), &mut dim) },
        QfStatus::NullPointer
    );
    unsafe {
        qf_algebra_free(ptr::null_mut());
        qf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/quiver_findim.h");
    for name in [
        "typedef struct QfAlgebra QfAlgebra",
        "QF_STATUS_OK = 0",
        "qf_algebra_parse",
        "qf_algebra_free",
        "qf_algebra_dimension",
        "qf_normal_form",
        "qf_projective_dimension",
        "qf_bound_report_json",
        "qf_last_error_message",
        "qf_string_free",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
