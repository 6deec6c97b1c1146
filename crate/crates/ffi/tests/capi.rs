use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hopfring_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    hr_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(hr_last_error()).to_str().unwrap().to_string()
}

#[test]
fn point_algebra_products() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hr_algebra_point(2, &mut h), HrStatus::Ok);
        assert_eq!(hr_algebra_prime(h), 2);
        let mut out = ptr::null_mut();
        assert_eq!(hr_cup(h, c("{w=2;g1^1}").as_ptr(), c("{w=2;g1^2}").as_ptr(), &mut out), HrStatus::Ok);
        assert_eq!(take(out), "{w=2;g1^3}");
        assert_eq!(hr_transfer(h, c("{w=1}").as_ptr(), c("{w=1}").as_ptr(), &mut out), HrStatus::Ok);
        assert_eq!(take(out), "0");
        assert_eq!(hr_divided_power(h, c("{w=1}").as_ptr(), 3, &mut out), HrStatus::Ok);
        assert_eq!(take(out), "{w=3}");
        assert_eq!(hr_coproduct(h, c("{w=2}").as_ptr(), &mut out), HrStatus::Ok);
        assert_eq!(take(out), "1*1 (x) {w=2} + 1*{w=1} (x) {w=1} + 1*{w=2} (x) 1");
        assert_eq!(hr_restrict(h, c("{w=2;g1^2}|{w=2}").as_ptr(), 3, 4, &mut out), HrStatus::Ok);
        assert_eq!(take(out), "{w=1}|{w=2;g1^2}");
        let mut n = 0u64;
        assert_eq!(hr_count_skyline(h, 4, 3, 0, &mut n), HrStatus::Ok);
        assert_eq!(n, 3);
        assert_eq!(hr_count_nakaoka(h, 4, 3, 0, &mut n), HrStatus::Ok);
        assert_eq!(n, 3);
        hr_algebra_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(hr_algebra_point(4, &mut h), HrStatus::Math);
        assert!(last_error().contains("not prime"));
        assert_eq!(hr_algebra_point(3, &mut h), HrStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(hr_normalize(h, c("{w=2;").as_ptr(), &mut out), HrStatus::Parse);
        assert!(last_error().starts_with("parse error"));
        assert_eq!(hr_normalize(h, ptr::null(), &mut out), HrStatus::NullPointer);
        assert_eq!(hr_normalize(ptr::null(), c("{w=1}").as_ptr(), &mut out), HrStatus::NullPointer);
        assert_eq!(hr_restrict(h, c("{w=1}").as_ptr(), 2, 1, &mut out), HrStatus::Math);
        let bytes = [0xffu8, 0];
        assert_eq!(hr_normalize(h, bytes.as_ptr() as *const c_char, &mut out), HrStatus::InvalidUtf8);
        hr_algebra_free(h);
        hr_algebra_free(ptr::null_mut());
        hr_string_free(ptr::null_mut());
    }
}

#[test]
fn sequences_and_stable_rings() {
    unsafe {
        let mut out = ptr::null_mut();
        let set = [1u32, 2];
        assert_eq!(hr_minimal_sequence(3, set.as_ptr(), 2, 3, false, &mut out), HrStatus::Ok);
        assert_eq!(take(out), "(0,0,1,1,1,2)");
        assert_eq!(hr_minimal_sequence(2, set.as_ptr(), 2, 3, false, &mut out), HrStatus::Parse);

        let json = include_str!("../../core/tests/data/rp2.json");
        let mut h = ptr::null_mut();
        assert_eq!(hr_algebra_from_json(c(json).as_ptr(), &mut h), HrStatus::Ok);
        let x = c("{w=1;dec=x}");
        assert_eq!(hr_limit_mul(h, x.as_ptr(), x.as_ptr(), HrFlavor::Cx, &mut out), HrStatus::Ok);
        assert_eq!(take(out), "1*{w=1;dec=x2}|1^[*]");
        assert_eq!(hr_stable_generators(h, 2, HrFlavor::Cx, &mut out), HrStatus::Ok);
        assert_eq!(take(out), "{w=1;dec=x}\t1\t2\n{w=2;dec=x}\t2\t2");
        hr_algebra_free(h);

        assert_eq!(hr_algebra_from_json(c("{").as_ptr(), &mut h), HrStatus::Parse);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hopfring.h")).unwrap();
    for name in [
        "hr_algebra_point",
        "hr_algebra_from_json",
        "hr_algebra_free",
        "hr_cup",
        "hr_transfer",
        "hr_coproduct",
        "hr_divided_power",
        "hr_restrict",
        "hr_limit_mul",
        "hr_minimal_sequence",
        "hr_stable_generators",
        "hr_last_error",
        "hr_string_free",
        "typedef struct HrAlgebra HrAlgebra",
        "HR_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}
