use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use fibrator_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe {
        fib_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn group(spec: &str) -> *mut FibGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fib_group_new(c(spec).as_ptr(), &mut g) }, FibStatus::Ok);
    g
}

#[test]
fn group_roundtrip() {
    let g = group("S3");
    let mut n = 0;
    assert_eq!(unsafe { fib_group_order(g, &mut n) }, FibStatus::Ok);
    assert_eq!(n, 6);
    unsafe { fib_group_free(g) };
}

#[test]
fn bad_group_sets_error() {
    let mut g = ptr::null_mut();
    let s = unsafe { fib_group_new(c("Z17q").as_ptr(), &mut g) };
    assert_ne!(s, FibStatus::Ok);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments() {
    let mut n = 0;
    assert_eq!(unsafe { fib_group_order(ptr::null(), &mut n) }, FibStatus::NullPointer);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fib_group_new(ptr::null(), &mut g) }, FibStatus::NullPointer);
    unsafe { fib_group_free(ptr::null_mut()) };
}

#[test]
fn class_counts() {
    let (s3, one) = (group("S3"), group("C1"));
    let mut n = 0;
    unsafe {
        assert_eq!(fib_pair_class_count(s3, s3, c("2").as_ptr(), &mut n), FibStatus::Ok);
        assert_eq!(n, 47);
        assert_eq!(fib_pair_class_count(s3, s3, c("1").as_ptr(), &mut n), FibStatus::Ok);
        assert_eq!(n, 22);
        assert_eq!(fib_pair_class_count(s3, one, c("2").as_ptr(), &mut n), FibStatus::Ok);
        assert_eq!(n, 6);
        fib_group_free(s3);
        fib_group_free(one);
    }
}

#[test]
fn mark_matrix_c2() {
    let g = group("C2");
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(fib_functor_new(c("trivial").as_ptr(), c("C2-closure").as_ptr(), c("2").as_ptr(), &mut f), FibStatus::Ok);
        let mut rank = 0;
        assert_eq!(fib_plus_rank(f, g, &mut rank), FibStatus::Ok);
        assert_eq!(rank, 3);
        let (mut r, mut k) = (0, 0);
        assert_eq!(fib_mark_matrix(f, g, &mut r, &mut k, ptr::null_mut(), 0), FibStatus::BufferTooSmall);
        assert_eq!((r, k), (3, 3));
        let mut data = vec![0i64; r * k];
        assert_eq!(fib_mark_matrix(f, g, &mut r, &mut k, data.as_mut_ptr(), data.len()), FibStatus::Ok);
        assert_eq!(data, vec![2, 1, 1, 0, 1, 0, 0, 0, 1]);
        fib_functor_free(f);
        fib_group_free(g);
    }
}

#[test]
fn unknown_functor() {
    let mut f = ptr::null_mut();
    let s = unsafe { fib_functor_new(c("nope").as_ptr(), c("C2").as_ptr(), c("2").as_ptr(), &mut f) };
    assert_eq!(s, FibStatus::Parse);
    assert!(last_error().contains("nope"));
}

#[test]
fn verify_report() {
    let mut failed = usize::MAX;
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(fib_verify(c("mobius-inverse").as_ptr(), c("2").as_ptr(), 0, &mut failed, &mut report), FibStatus::Ok);
        assert_eq!(failed, 0);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        fib_string_free(report);
        assert!(text.lines().count() > 0);
        assert!(text.lines().all(|l| l.contains("\"pass\":true")));
        assert_eq!(fib_verify(c("bogus").as_ptr(), c("2").as_ptr(), 0, &mut failed, ptr::null_mut()), FibStatus::Parse);
    }
}

#[test]
fn header_declares_api() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/fibrator.h");
    let h = std::fs::read_to_string(path).unwrap();
    for name in [
        "fib_last_error",
        "fib_group_new",
        "fib_group_free",
        "fib_group_order",
        "fib_pair_class_count",
        "fib_functor_new",
        "fib_functor_free",
        "fib_plus_rank",
        "fib_mark_matrix",
        "fib_verify",
        "fib_string_free",
        "FIB_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
    // Syntax check with the system C compiler when one is present.
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
