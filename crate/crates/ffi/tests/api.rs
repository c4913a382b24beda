use std::ffi::{CStr, CString};
use std::ptr;

use adic_shifts_ffi::*;

fn space(s: u32, depth: u32) -> *mut AdicSpace {
    let mut sp = ptr::null_mut();
    assert_eq!(unsafe { adic_space_new(s, depth, &mut sp) }, AdicStatus::Ok);
    sp
}

fn parse(sp: *const AdicSpace, spec: &str) -> *mut AdicOperator {
    let spec = CString::new(spec).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { adic_operator_parse(sp, spec.as_ptr(), &mut op) }, AdicStatus::Ok);
    op
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(adic_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn space_lifecycle() {
    let sp = space(2, 3);
    assert_eq!(unsafe { adic_space_dim(sp) }, 15);
    let mut idx = 0usize;
    assert_eq!(unsafe { adic_space_index(sp, 2, 3, &mut idx) }, AdicStatus::Ok);
    assert_eq!(idx, 6);
    assert_eq!(unsafe { adic_space_index(sp, 2, 4, &mut idx) }, AdicStatus::OutOfRange);
    assert!(!last_error().is_empty());
    unsafe { adic_space_free(sp) };
}

#[test]
fn invalid_base_is_reported() {
    let mut sp = ptr::null_mut();
    assert_eq!(unsafe { adic_space_new(1, 3, &mut sp) }, AdicStatus::InvalidBase);
    assert!(sp.is_null());
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(unsafe { adic_space_new(2, 3, ptr::null_mut()) }, AdicStatus::NullPointer);
    let mut op = ptr::null_mut();
    assert_eq!(
        unsafe { adic_shift_new(ptr::null(), AdicShift::U, false, &mut op) },
        AdicStatus::NullPointer
    );
    assert_eq!(unsafe { adic_space_dim(ptr::null()) }, 0);
    unsafe {
        adic_space_free(ptr::null_mut());
        adic_operator_free(ptr::null_mut());
        adic_string_free(ptr::null_mut());
    }
}

#[test]
fn shift_isometry_through_the_abi() {
    let sp = space(3, 3);
    let (mut w, mut ws, mut prod) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(adic_shift_new(sp, AdicShift::W, false, &mut w), AdicStatus::Ok);
        assert_eq!(adic_shift_new(sp, AdicShift::W, true, &mut ws), AdicStatus::Ok);
        assert_eq!(adic_operator_mul(ws, w, &mut prod), AdicStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(adic_operator_entry(prod, 1, 2, 1, 2, &mut re, &mut im), AdicStatus::Ok);
        assert!((re - 1.0).abs() < 1e-15 && im == 0.0);
        assert_eq!(adic_operator_entry(w, 1, 0, 0, 0, &mut re, &mut im), AdicStatus::Ok);
        assert!((re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        for op in [w, ws, prod] {
            adic_operator_free(op);
        }
        adic_space_free(sp);
    }
}

#[test]
fn parse_norm_and_dump() {
    let sp = space(2, 2);
    let u = parse(sp, "U");
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { adic_operator_dump(u, &mut text) }, AdicStatus::Ok);
    let dump = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    unsafe { adic_string_free(text) };
    assert!(dump.starts_with("# s=2 N=2 dim=7 ordering=level-lex"));
    assert_eq!(dump.lines().count(), 4);
    assert_eq!(unsafe { adic_operator_nnz(u) }, 3);

    let p = parse(sp, "I - U.U*");
    let mut norm = 0.0;
    assert_eq!(unsafe { adic_operator_norm(p, 1e-12, &mut norm) }, AdicStatus::Ok);
    assert!((norm - 1.0).abs() < 1e-12);

    let (mut adj, mut sum) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(adic_operator_adjoint(p, &mut adj), AdicStatus::Ok);
        assert_eq!(adic_operator_add_scaled(p, adj, -1.0, 0.0, &mut sum), AdicStatus::Ok);
        assert_eq!(adic_operator_nnz(sum), 0);
        for op in [u, p, adj, sum] {
            adic_operator_free(op);
        }
        adic_space_free(sp);
    }
}

#[test]
fn parse_errors_carry_a_message() {
    let sp = space(2, 2);
    let spec = CString::new("U.Q").unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { adic_operator_parse(sp, spec.as_ptr(), &mut op) }, AdicStatus::ParseError);
    assert!(last_error().contains("Q"));
    unsafe { adic_space_free(sp) };
}

#[test]
fn mismatched_spaces() {
    let (a, b) = (space(2, 2), space(2, 3));
    let (x, y) = (parse(a, "U"), parse(b, "U"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { adic_operator_mul(x, y, &mut out) }, AdicStatus::Mismatch);
    unsafe {
        adic_operator_free(x);
        adic_operator_free(y);
        adic_space_free(a);
        adic_space_free(b);
    }
}

#[test]
fn checks_through_the_abi() {
    let name = CString::new("isometry.U").unwrap();
    let (mut pass, mut resid) = (false, 1.0);
    let status = unsafe { adic_run_check(name.as_ptr(), 2, 6, adic_default_seed(), 0.0, &mut pass, &mut resid) };
    assert_eq!(status, AdicStatus::Ok);
    assert!(pass && resid < 1e-12);

    let bad = CString::new("no.such").unwrap();
    let status = unsafe { adic_run_check(bad.as_ptr(), 2, 6, 1, 0.0, &mut pass, &mut resid) };
    assert_eq!(status, AdicStatus::UnknownCheck);

    let filter = CString::new("hensel").unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    let status = unsafe { adic_run_suite_json(filter.as_ptr(), 2, 5, 3, &mut passed, &mut report) };
    assert_eq!(status, AdicStatus::Ok);
    assert!(passed);
    let json = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe { adic_string_free(report) };
    assert!(json.contains("\"suite\": \"hensel\""));
}

#[test]
fn status_messages_are_static() {
    let msg = unsafe { CStr::from_ptr(adic_status_message(AdicStatus::NotConverged)) };
    assert_eq!(msg.to_str().unwrap(), "norm iteration did not converge");
}
