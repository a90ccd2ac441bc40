use std::ffi::{CStr, CString};
use std::ptr;

use gqflag_ffi::*;

fn last_error() -> String {
    let p = gqf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn order(h: *const GqfStructure) -> (u64, u64) {
    let (mut s, mut t) = (0, 0);
    assert_eq!(unsafe { gqf_structure_verify(h, &mut s, &mut t) }, GqfStatus::Ok);
    (s, t)
}

#[test]
fn build_scheme_and_numbers_agree_with_table() {
    unsafe {
        let mut w3 = ptr::null_mut();
        assert_eq!(gqf_structure_build_symplectic(3, &mut w3), GqfStatus::Ok);
        let mut scheme = ptr::null_mut();
        assert_eq!(gqf_scheme_from_structure(w3, &mut scheme), GqfStatus::Ok);
        let (mut n, mut d) = (0, 0);
        assert_eq!(gqf_scheme_dimensions(scheme, &mut n, &mut d), GqfStatus::Ok);
        assert_eq!((n, d), (160, 7));
        for k in 0..=7 {
            for i in 0..=7 {
                for j in 0..=7 {
                    let (mut counted, mut closed) = (0, 0);
                    assert_eq!(gqf_scheme_intersection_number(scheme, k, i, j, &mut counted), GqfStatus::Ok);
                    assert_eq!(gqf_flag_number(k, i, j, 3, 3, &mut closed), GqfStatus::Ok);
                    assert_eq!(counted, closed, "p[{k}][{i}][{j}]");
                }
            }
        }
        let mut eta = 0;
        assert_eq!(gqf_scheme_valency(scheme, 7, &mut eta), GqfStatus::Ok);
        assert_eq!(eta, 81);
        assert_eq!(gqf_scheme_valency(scheme, 8, &mut eta), GqfStatus::OutOfRange);
        let mut r = 0;
        assert_eq!(gqf_scheme_relation(scheme, 0, 0, &mut r), GqfStatus::Ok);
        assert_eq!(r, 0);
        assert_eq!(gqf_scheme_relation(scheme, 0, 160, &mut r), GqfStatus::OutOfRange);
        gqf_scheme_free(scheme);
        gqf_structure_free(w3);
    }
}

#[test]
fn seven_class_scramble_round_trip_with_orientation() {
    unsafe {
        let mut grid = ptr::null_mut();
        assert_eq!(gqf_structure_build_grid(3, &mut grid), GqfStatus::Ok);
        let mut scheme = ptr::null_mut();
        assert_eq!(gqf_scheme_from_structure(grid, &mut scheme), GqfStatus::Ok);
        let mut mixed = ptr::null_mut();
        assert_eq!(gqf_scheme_scramble(scheme, 17, &mut mixed), GqfStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(gqf_reconstruct_7class(mixed, 3, 1, &mut back), GqfStatus::Ok);
        assert_eq!(order(back), (3, 1));
        let mut counts = (0, 0, 0);
        assert_eq!(gqf_structure_counts(back, &mut counts.0, &mut counts.1, &mut counts.2), GqfStatus::Ok);
        assert_eq!(counts, (16, 8, 32));
        gqf_structure_free(back);
        gqf_scheme_free(mixed);
        gqf_scheme_free(scheme);
        gqf_structure_free(grid);
    }
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spath = CString::new(dir.path().join("g.json").to_str().unwrap()).unwrap();
    let mpath = CString::new(dir.path().join("g.scheme").to_str().unwrap()).unwrap();
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gqf_structure_build_dual_grid(2, &mut g), GqfStatus::Ok);
        assert_eq!(order(g), (1, 2));
        assert_eq!(gqf_structure_save(g, spath.as_ptr()), GqfStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(gqf_structure_load(spath.as_ptr(), &mut loaded), GqfStatus::Ok);
        let mut dual = ptr::null_mut();
        assert_eq!(gqf_structure_dualize(loaded, &mut dual), GqfStatus::Ok);
        assert_eq!(order(dual), (2, 1));

        let mut scheme = ptr::null_mut();
        assert_eq!(gqf_scheme_from_structure(loaded, &mut scheme), GqfStatus::Ok);
        assert_eq!(gqf_scheme_save(scheme, mpath.as_ptr()), GqfStatus::Ok);
        let mut reread = ptr::null_mut();
        assert_eq!(gqf_scheme_load(mpath.as_ptr(), &mut reread), GqfStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(gqf_reconstruct_7class(reread, 0, 0, &mut back), GqfStatus::Ok);
        assert_eq!(order(back), (1, 2));
        gqf_structure_free(back);
        gqf_scheme_free(reread);
        gqf_scheme_free(scheme);
        gqf_structure_free(dual);
        gqf_structure_free(loaded);
        gqf_structure_free(g);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(gqf_structure_build_grid(0, &mut h), GqfStatus::InvalidArgument);
        let missing = CString::new("/nonexistent/file.json").unwrap();
        assert_eq!(gqf_structure_load(missing.as_ptr(), &mut h), GqfStatus::IoError);
        assert!(last_error().contains("/nonexistent/file.json"));
        assert_eq!(gqf_structure_load(ptr::null(), &mut h), GqfStatus::NullPointer);

        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.scheme");
        std::fs::write(&bad, "2 1\n0 1\n1 zero\n").unwrap();
        let bad = CString::new(bad.to_str().unwrap()).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(gqf_scheme_load(bad.as_ptr(), &mut s), GqfStatus::ParseError);
        assert!(last_error().contains("line 3"), "{}", last_error());
        assert!(s.is_null());

        // a grid scheme is not four-class data
        let mut g = ptr::null_mut();
        assert_eq!(gqf_structure_build_grid(2, &mut g), GqfStatus::Ok);
        let mut scheme = ptr::null_mut();
        assert_eq!(gqf_scheme_from_structure(g, &mut scheme), GqfStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(gqf_reconstruct_4class(scheme, &mut out), GqfStatus::InvalidArgument);
        let mut v = 0;
        assert_eq!(gqf_fused_number(5, 0, 0, 2, &mut v), GqfStatus::OutOfRange);
        assert_eq!(gqf_fused_number(4, 4, 4, 2, &mut v), GqfStatus::Ok);
        gqf_scheme_free(scheme);
        gqf_structure_free(g);
        gqf_structure_free(ptr::null_mut());
        gqf_scheme_free(ptr::null_mut());
    }
}
