use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use mdsc_ffi::*;

fn last_error() -> String {
    let mut need = 0usize;
    unsafe {
        mdsc_last_error(ptr::null_mut(), 0, &mut need);
        let mut buf = vec![0 as c_char; need];
        assert_eq!(mdsc_last_error(buf.as_mut_ptr(), need, &mut need), MdscStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn catalog(name: &str) -> *mut MdscCode {
    let name = CString::new(name).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { mdsc_code_catalog(name.as_ptr(), &mut code) }, MdscStatus::Ok);
    assert!(!code.is_null());
    code
}

#[test]
fn counts_through_c_interface() {
    let code = catalog("md1");
    let mut p = [0usize; 6];
    let mut n = 0u64;
    unsafe {
        assert_eq!(mdsc_code_params(code, p.as_mut_ptr()), MdscStatus::Ok);
        assert_eq!(mdsc_count(code, MdscObjectKind::Cycle4, false, &mut n), MdscStatus::Ok);
        assert_eq!(n, 0);
        assert_eq!(mdsc_count(code, MdscObjectKind::Cfg66, true, &mut n), MdscStatus::Ok);
        assert!(n > 0);
        mdsc_code_free(code);
    }
    let c = mdsc::catalog::by_name("md1").unwrap().params;
    assert_eq!(p, [c.gamma, c.kappa, c.z, c.coupling, c.m, c.aux]);
}

#[test]
fn matrix_and_alist() {
    let code = catalog("md7");
    let mut m = ptr::null_mut();
    let (mut r, mut c, mut nnz, mut need) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(mdsc_matrix_build(code, &mut m), MdscStatus::Ok);
        assert_eq!(mdsc_matrix_shape(m, &mut r, &mut c, &mut nnz), MdscStatus::Ok);
        assert_eq!((r, c), (1300, 3250));
        assert!(nnz > 0);
        let mut small = [0 as c_char; 4];
        assert_eq!(mdsc_matrix_alist(m, small.as_mut_ptr(), 4, &mut need), MdscStatus::BufferTooSmall);
        let mut buf = vec![0 as c_char; need];
        assert_eq!(mdsc_matrix_alist(m, buf.as_mut_ptr(), need, &mut need), MdscStatus::Ok);
        let text = CStr::from_ptr(buf.as_ptr()).to_string_lossy();
        assert!(text.starts_with("3250 1300"));
        mdsc_matrix_free(m);
        mdsc_code_free(code);
    }
}

#[test]
fn grade_and_forecast() {
    let code = catalog("md1");
    let pstar = [0.5, 0.5];
    let mut g = ptr::null_mut();
    let (mut obj, mut iters, mut dens) = (0.0, 0usize, 0.0);
    let (mut rows, mut cols) = (0, 0);
    let mut bounds = [0.0; 3];
    unsafe {
        assert_eq!(mdsc_grade_run(code, MdscTarget::Cycle6, pstar.as_ptr(), 2, 0.35, &mut g), MdscStatus::Ok);
        assert_eq!(mdsc_grade_summary(g, &mut obj, &mut iters, &mut dens), MdscStatus::Ok);
        assert!(obj.is_finite() && obj >= 0.0);
        assert_eq!(mdsc_grade_distribution(g, ptr::null_mut(), 0, &mut rows, &mut cols), MdscStatus::BufferTooSmall);
        let mut p = vec![0.0; rows * cols];
        assert_eq!(mdsc_grade_distribution(g, p.as_mut_ptr(), p.len(), &mut rows, &mut cols), MdscStatus::Ok);
        for r in 0..rows {
            let s: f64 = p[r * cols..(r + 1) * cols].iter().sum();
            assert!((s - pstar[r]).abs() < 1e-6, "row {r} sums to {s}");
        }
        assert_eq!(mdsc_forecast(code, 100.0, 6, bounds.as_mut_ptr()), MdscStatus::Ok);
        mdsc_grade_free(g);
        mdsc_code_free(code);
    }
    assert!(bounds[1] <= bounds[0] && bounds[0] <= bounds[2]);
}

#[test]
fn errors_are_reported() {
    let mut code = ptr::null_mut();
    let bad = CString::new("nope").unwrap();
    unsafe {
        assert_eq!(mdsc_code_catalog(ptr::null(), &mut code), MdscStatus::NullPointer);
        assert_eq!(mdsc_code_catalog(bad.as_ptr(), &mut code), MdscStatus::InvalidArgument);
        assert!(last_error().contains("nope"));
        let k = [0u32; 4];
        assert_ne!(mdsc_code_new(2, 2, 0, 1, 1, 2, k.as_ptr(), k.as_ptr(), ptr::null(), &mut code), MdscStatus::Ok);
        assert!(code.is_null());
        assert!(!last_error().is_empty());
        let mut n = 0u64;
        assert_eq!(mdsc_count(ptr::null(), MdscObjectKind::Cycle6, false, &mut n), MdscStatus::NullPointer);
        mdsc_code_free(ptr::null_mut());
        assert!(!CStr::from_ptr(mdsc_version()).to_bytes().is_empty());
    }
}

#[test]
fn custom_code_round_trip() {
    let k = [0u32, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0];
    let l = [0u32, 0, 0, 0, 0, 1, 2, 3, 0, 2, 4, 1];
    let mut code = ptr::null_mut();
    let mut n = 0u64;
    unsafe {
        let s = mdsc_code_new(3, 4, 5, 3, 1, 2, k.as_ptr(), l.as_ptr(), ptr::null(), &mut code);
        assert_eq!(s, MdscStatus::Ok, "{}", last_error());
        assert_eq!(mdsc_count(code, MdscObjectKind::Cycle6, false, &mut n), MdscStatus::Ok);
        mdsc_code_free(code);
    }
}

#[test]
fn header_declares_interface() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/mdsc.h");
    let header = std::fs::read_to_string(path).unwrap();
    for f in [
        "mdsc_version",
        "mdsc_last_error",
        "mdsc_code_catalog",
        "mdsc_code_new",
        "mdsc_code_free",
        "mdsc_count",
        "mdsc_grade_run",
        "mdsc_grade_distribution",
        "mdsc_forecast",
        "mdsc_matrix_build",
        "mdsc_matrix_alist",
        "mdsc_matrix_free",
        "typedef struct MdscCode MdscCode",
    ] {
        assert!(header.contains(f), "missing {f}");
    }
    if let Ok(o) = Command::new("cc").args(["-fsyntax-only", "-x", "c", path]).output() {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}
