use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use thrackle_core::gen::{generate, Family};
use thrackle_core::io::drawing_to_json;
use thrackle_ffi::*;

fn load(f: Family) -> *mut ThrDrawing {
    let text = CString::new(drawing_to_json(&generate(f, 0).unwrap())).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { thr_drawing_from_json(text.as_ptr(), &mut d) }, ThrStatus::Ok);
    d
}

fn last_error() -> String {
    let p = thr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn drawing_handle_lifecycle() {
    let d = load(Family::StarThrackle { n: 5 });
    let (mut n, mut m, mut bad) = (0, 0, 99);
    unsafe {
        assert_eq!(thr_drawing_counts(d, &mut n, &mut m), ThrStatus::Ok);
        assert_eq!(thr_validate(d, &mut bad), ThrStatus::Ok);
    }
    assert_eq!((n, m, bad), (5, 5, 0));
    let (mut th, mut tt, mut simple) = (false, false, false);
    assert_eq!(unsafe { thr_classify(d, &mut th, &mut tt, &mut simple) }, ThrStatus::Ok);
    assert!(th && tt && simple);
    let mut found = true;
    assert_eq!(unsafe { thr_has_disjoint_biclique(d, 1, &mut found) }, ThrStatus::Ok);
    assert!(!found);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { thr_drawing_to_json(d, &mut json) }, ThrStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(text.contains("\"version\": 1"));
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { thr_pair_table_json(d, &mut table) }, ThrStatus::Ok);
    let pairs: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(table) }.to_str().unwrap()).unwrap();
    assert_eq!(pairs.as_array().unwrap().len(), 10);
    unsafe {
        thr_string_free(json);
        thr_string_free(table);
        thr_drawing_free(d);
    }
}

#[test]
fn transforms_return_new_handles() {
    let star = load(Family::Star { k: 6 });
    let mut split = ptr::null_mut();
    assert_eq!(unsafe { thr_split(star, 2, &mut split) }, ThrStatus::Ok);
    let (mut n, mut m) = (0, 0);
    unsafe { thr_drawing_counts(split, &mut n, &mut m) };
    assert_eq!(m, 6);
    assert!(n > 7);

    let tangled = load(Family::Tangled);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { thr_perturb(tangled, &mut p) }, ThrStatus::Ok);
    let (mut th, mut tt, mut simple) = (true, true, false);
    unsafe { thr_classify(p, &mut th, &mut tt, &mut simple) };
    assert!(!tt && simple);

    let bip = load(Family::RandomBipartite { n: 8, m: 9 });
    let (mut parity, mut json) = (false, ptr::null_mut());
    assert_eq!(unsafe { thr_strip_redraw(bip, &mut parity, &mut json) }, ThrStatus::Ok);
    assert!(parity);

    let mut none = ptr::null_mut();
    assert_eq!(unsafe { thr_strip_redraw(star, &mut parity, &mut none) }, ThrStatus::Failed);
    assert!(last_error().contains("bipartition"));
    unsafe {
        thr_string_free(json);
        for d in [star, split, tangled, p, bip] {
            thr_drawing_free(d);
        }
    }
}

#[test]
fn error_codes() {
    let mut d = ptr::null_mut();
    let junk = CString::new("{not json").unwrap();
    assert_eq!(unsafe { thr_drawing_from_json(junk.as_ptr(), &mut d) }, ThrStatus::Parse);
    assert!(d.is_null());
    assert_eq!(unsafe { thr_drawing_from_json(ptr::null(), &mut d) }, ThrStatus::NullPointer);
    let mut x = 0usize;
    assert_eq!(unsafe { thr_validate(ptr::null(), &mut x) }, ThrStatus::NullPointer);
    let mut a = 0.0;
    assert_eq!(unsafe { thr_alpha(0, &mut a) }, ThrStatus::InvalidArgument);
    assert!(last_error().contains("positive"));
    assert_eq!(unsafe { thr_alpha(1, &mut a) }, ThrStatus::Ok);
    assert!(thr_last_error().is_null());
    assert!((a - 1.0964).abs() < 1e-3);
}

#[test]
fn numeric_entry_points() {
    let mut k = 0u64;
    assert_eq!(unsafe { thr_strip_crossing_formula(7, 9, &mut k) }, ThrStatus::Ok);
    assert_eq!(k, 63);
    let (mut ratio, mut c) = (0.0, false);
    unsafe { thr_euler_density_check(200, &mut ratio, &mut c) };
    assert!(ratio > 3.3 && ratio < 3.4 && c);
    let mut l = 0usize;
    unsafe { thr_lambda_brute(2, 3, &mut l) };
    assert_eq!(l, 4);
    assert!(thr_lambda3_upper(4) >= 12.0);
    let mut ok = false;
    let seq = [0u32, 1, 0, 1];
    unsafe { thr_is_ds_sequence(seq.as_ptr(), 4, 3, &mut ok) };
    assert!(ok);
    unsafe { thr_is_ds_sequence(seq.as_ptr(), 4, 2, &mut ok) };
    assert!(!ok);
    let k4 = [0u32, 1, 0, 2, 0, 3, 1, 2, 1, 3, 2, 3];
    let mut w = 0;
    assert_eq!(unsafe { thr_bisection_width(4, k4.as_ptr(), 6, true, 0, &mut w) }, ThrStatus::Ok);
    assert_eq!(w, 4);
    let bad = [0u32, 9];
    assert_eq!(unsafe { thr_bisection_width(4, bad.as_ptr(), 1, true, 0, &mut w) }, ThrStatus::InvalidArgument);
}

#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/thrackle.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["thr_drawing_from_json", "thr_split", "thr_bisection_width", "THR_STATUS_PANIC"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    match Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; syntax check skipped"),
    }
}
