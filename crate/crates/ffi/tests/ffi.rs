use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use phaseless_ffi::*;

fn parse(text: &str) -> *mut PlMatrix {
    let c = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pl_matrix_parse(c.as_ptr(), &mut m) }, PlStatus::PlOk);
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pl_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn derangement_decision_and_certificate() {
    let m = parse("0,1,1,1\n1,0,1,1\n1,1,0,1\n1,1,1,0");
    assert_eq!(unsafe { (pl_matrix_rows(m), pl_matrix_cols(m)) }, (4, 4));
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pl_decide(m, &mut d) }, PlStatus::PlOk);
    assert_eq!(unsafe { pl_decision_is_nonmaximal(d) }, 1);

    let mut lambda = [0.0; 4];
    let mut n = 0;
    assert_eq!(unsafe { pl_decision_lambda(d, lambda.as_mut_ptr(), 4, &mut n) }, PlStatus::PlOk);
    assert_eq!(n, 4);
    assert!(lambda.iter().all(|&l| (l - 0.25).abs() < 1e-15));
    let mut short = [0.0; 2];
    assert_eq!(unsafe { pl_decision_lambda(d, short.as_mut_ptr(), 2, &mut n) }, PlStatus::PlBufferTooSmall);
    assert_eq!(n, 4);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { pl_decision_certificate(d, &mut text) }, PlStatus::PlOk);
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    assert!(s.starts_with("verdict = nonmaximal\n"));
    unsafe {
        pl_string_free(text);
        pl_decision_free(d);
        pl_matrix_free(m);
    }
}

#[test]
fn identity_is_maximal_with_permutation() {
    let data = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pl_matrix_from_f64(3, 3, data.as_ptr(), &mut m) }, PlStatus::PlOk);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pl_decide(m, &mut d) }, PlStatus::PlOk);
    assert_eq!(unsafe { pl_decision_is_nonmaximal(d) }, 0);
    let mut perm = [9usize; 3];
    let mut n = 0;
    assert_eq!(unsafe { pl_decision_permutation(d, perm.as_mut_ptr(), 3, &mut n) }, PlStatus::PlOk);
    assert_eq!((n, perm), (3, [0, 1, 2]));
    assert_eq!(unsafe { pl_decision_lambda(d, ptr::null_mut(), 0, &mut n) }, PlStatus::PlOk);
    assert_eq!(n, 0);
    unsafe {
        pl_decision_free(d);
        pl_matrix_free(m);
    }
}

#[test]
fn bounds() {
    let m = parse("2,1,1,1,1\n1,2,1,1,1\n1,1,2,1,1\n1,1,1,2,1\n1,1,1,1,2");
    let (mut lo, mut hi) = (0, 0);
    assert_eq!(unsafe { pl_bracket(m, 0, 0, &mut lo, &mut hi) }, PlStatus::PlOk);
    assert_eq!((lo, hi), (3, 3));
    let mut h = 0;
    assert_eq!(unsafe { pl_hadamard_lower_bound(m, &mut h) }, PlStatus::PlOk);
    assert_eq!(h, 3);
    unsafe { pl_matrix_free(m) };

    assert_eq!(unsafe { pl_typical_rank_bounds(5, 100, &mut lo, &mut hi) }, PlStatus::PlOk);
    assert_eq!((lo, hi), (3, 3));
    assert_eq!(unsafe { pl_typical_rank_bounds(2, 4, &mut lo, &mut hi) }, PlStatus::PlDomainError);
}

#[test]
fn amoeba() {
    let mut member = -1;
    let zero = [0.0; 4];
    assert_eq!(unsafe { pl_amoeba_membership(zero.as_ptr(), 2, 2, 1, &mut member) }, PlStatus::PlOk);
    assert_eq!(member, 1);
    let skew = [3.0, 0.0, 0.0, 3.0];
    assert_eq!(unsafe { pl_amoeba_membership(skew.as_ptr(), 2, 2, 1, &mut member) }, PlStatus::PlOk);
    assert_eq!(member, 0);
    assert_eq!(unsafe { pl_amoeba_membership(zero.as_ptr(), 0, 3, 0, &mut member) }, PlStatus::PlDimensionError);
}

#[test]
fn error_codes_and_messages() {
    let bad = CString::new("1,2\n3").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pl_matrix_parse(bad.as_ptr(), &mut m) }, PlStatus::PlParseError);
    assert!(m.is_null());
    assert!(last_error().contains("line 2"));

    let neg = [1.0, -1.0];
    assert_eq!(unsafe { pl_matrix_from_f64(1, 2, neg.as_ptr(), &mut m) }, PlStatus::PlNegativeEntry);
    assert_eq!(unsafe { pl_matrix_from_f64(1, 2, ptr::null(), &mut m) }, PlStatus::PlNullPointer);
    assert_eq!(unsafe { pl_decide(ptr::null(), &mut ptr::null_mut()) }, PlStatus::PlNullPointer);
    assert_eq!(unsafe { pl_decision_is_nonmaximal(ptr::null()) }, -1);
    unsafe {
        pl_matrix_free(ptr::null_mut());
        pl_decision_free(ptr::null_mut());
        pl_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { CStr::from_ptr(pl_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/phaseless.h")).unwrap();
    let source = std::fs::read_to_string(format!("{dir}/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let probe = tempfile::Builder::new().suffix(".c").tempfile().unwrap();
    std::fs::write(
        probe.path(),
        "#include \"phaseless.h\"\nint main(void) { PlMatrix *m = 0; return pl_matrix_rows(m) == 0 ? PL_OK : PL_INTERNAL_ERROR; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(probe.path())
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
