use std::ffi::{CStr, CString};
use std::ptr;

use ruelle_ffi::*;

fn matrix(dim: usize, e: &[i64]) -> *mut RuelleMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ruelle_matrix_new(dim, e.as_ptr(), &mut m) }, RuelleStatus::Ok);
    m
}

fn zeta_text(z: *const RuelleZeta) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_to_string(z, &mut s) }, RuelleStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ruelle_string_free(s) };
    out
}

fn last_error() -> String {
    let p = ruelle_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn golden_mean_round_trip() {
    let m = matrix(2, &[1, 1, 1, 0]);
    let mut n = 0u64;
    assert_eq!(unsafe { ruelle_sft_count_periodic(m, 5, &mut n) }, RuelleStatus::Ok);
    assert_eq!(n, 11);

    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_from_sft(m, &mut z) }, RuelleStatus::Ok);
    assert_eq!(zeta_text(z), "1/(1 - z - z^2)");
    let mut counts = [0u64; 6];
    assert_eq!(unsafe { ruelle_zeta_counts(z, 6, counts.as_mut_ptr()) }, RuelleStatus::Ok);
    assert_eq!(counts, [1, 3, 4, 7, 11, 18]);
    let (mut rho, mut h) = (0.0, 0.0);
    assert_eq!(unsafe { ruelle_zeta_radius(z, &mut rho, &mut h) }, RuelleStatus::Ok);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((rho - 1.0 / phi).abs() < 1e-9 && (h - phi.ln()).abs() < 1e-9);

    let (mut v, mut lo, mut hi) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { ruelle_sft_entropy(m, &mut v, &mut lo, &mut hi) }, RuelleStatus::Ok);
    assert!(lo <= v && v <= hi && (v - phi.ln()).abs() < 1e-9);
    unsafe {
        ruelle_zeta_free(z);
        ruelle_matrix_free(m);
    }
}

#[test]
fn circle_and_toral_zeta() {
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_circle(3, &mut z) }, RuelleStatus::Ok);
    assert_eq!(zeta_text(z), "(1 - z)/(1 - 3z)");
    unsafe { ruelle_zeta_free(z) };

    let cat = matrix(2, &[2, 1, 1, 1]);
    let mut n = 0;
    assert_eq!(unsafe { ruelle_toral_count(cat, 5, &mut n) }, RuelleStatus::Ok);
    assert_eq!(n, 121);
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_toral(cat, 12, &mut z) }, RuelleStatus::Ok);
    assert_eq!(zeta_text(z), "(1 - 2z + z^2)/(1 - 3z + z^2)");
    unsafe {
        ruelle_zeta_free(z);
        ruelle_matrix_free(cat);
    }
}

#[test]
fn parsing() {
    let src = CString::new("2\n1 1\n1 0\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ruelle_matrix_parse(src.as_ptr(), &mut m) }, RuelleStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { ruelle_sft_count_periodic(m, 2, &mut n) }, RuelleStatus::Ok);
    assert_eq!(n, 3);
    unsafe { ruelle_matrix_free(m) };

    let src = CString::new("num: 1 -1 / den: 1 -2").unwrap();
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_parse(src.as_ptr(), &mut z) }, RuelleStatus::Ok);
    assert_eq!(zeta_text(z), "(1 - z)/(1 - 2z)");
    unsafe { ruelle_zeta_free(z) };

    let bad = CString::new("num: 1 / den").unwrap();
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_parse(bad.as_ptr(), &mut z) }, RuelleStatus::Parse);
    assert!(z.is_null());
    assert!(last_error().contains("num"));
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ruelle_matrix_new(2, ptr::null(), &mut m) }, RuelleStatus::NullPointer);
    assert_eq!(unsafe { ruelle_matrix_new(0, [0i64].as_ptr(), &mut m) }, RuelleStatus::InvalidArgument);

    let two = matrix(1, &[2]);
    let mut n = 0;
    assert_eq!(unsafe { ruelle_sft_count_periodic(two, 1, &mut n) }, RuelleStatus::InvalidArgument);
    assert!(last_error().contains("0, 1"));
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    let id = matrix(2, &[1, 0, 0, 1]);
    assert_eq!(unsafe { ruelle_sft_entropy(id, &mut a, &mut b, &mut c) }, RuelleStatus::Failure);

    let full = matrix(3, &[1; 9]);
    let mut big = 0;
    assert_eq!(unsafe { ruelle_sft_count_periodic(full, 60, &mut big) }, RuelleStatus::Overflow);
    assert_eq!(unsafe { ruelle_sft_count_periodic(full, 40, &mut big) }, RuelleStatus::Ok);
    assert_eq!(big, 3u64.pow(40));
    assert!(ruelle_last_error().is_null());

    let mut z = ptr::null_mut();
    assert_eq!(unsafe { ruelle_zeta_circle(1, &mut z) }, RuelleStatus::Precondition);
    assert_eq!(unsafe { ruelle_zeta_from_sft(ptr::null(), &mut z) }, RuelleStatus::NullPointer);
    unsafe {
        ruelle_matrix_free(two);
        ruelle_matrix_free(id);
        ruelle_matrix_free(full);
        ruelle_matrix_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(ruelle_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
