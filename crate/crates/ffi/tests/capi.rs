use std::ffi::{CStr, CString};
use std::ptr;

use qcontext_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    qc_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = qc_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn ghz_preset_is_strong() {
    unsafe {
        let mut st = ptr::null_mut();
        assert_eq!(qc_state_parse(cstr("ghz:3").as_ptr(), &mut st), QcStatus::Ok);
        assert_eq!(qc_state_n_qubits(st), 3);
        let mut m = ptr::null_mut();
        assert_eq!(qc_model_build(st, ptr::null(), &mut m), QcStatus::Ok);
        let mut label = QcLabel::NonContextual;
        let mut consistent = u64::MAX;
        assert_eq!(qc_classify(m, &mut label, &mut consistent), QcStatus::Ok);
        assert_eq!(label, QcLabel::Strong);
        assert_eq!(consistent, 0);
        qc_model_free(m);
        qc_state_free(st);
    }
}

#[test]
fn json_round_trip_keeps_class() {
    unsafe {
        let mut st = ptr::null_mut();
        assert_eq!(qc_state_parse(cstr("fd:q1q2").as_ptr(), &mut st), QcStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(qc_model_build(st, cstr("Y/Z").as_ptr(), &mut m), QcStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(qc_model_to_json(m, &mut json), QcStatus::Ok);
        let text = take(json);
        let mut back = ptr::null_mut();
        assert_eq!(qc_model_from_json(cstr(&text).as_ptr(), &mut back), QcStatus::Ok);
        let mut label = QcLabel::Strong;
        assert_eq!(qc_classify(back, &mut label, ptr::null_mut()), QcStatus::Ok);
        assert_eq!(label, QcLabel::Logical);
        qc_model_free(back);
        qc_model_free(m);
        qc_state_free(st);
    }
}

#[test]
fn dicke_violation_and_errors() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(qc_dicke_violation(3, 2, &mut out), QcStatus::Ok);
        assert_eq!(take(out), "1/4");
        assert_eq!(qc_dicke_violation(2, 1, &mut out), QcStatus::StrictnessFails);
        assert!(last_error().contains("strict"));
        assert_eq!(qc_dicke_violation(3, 0, &mut out), QcStatus::InvalidArgument);
        assert_eq!(qc_dicke_violation(40, 1, &mut out), QcStatus::SizeBound);
    }
}

#[test]
fn bad_input_codes() {
    unsafe {
        let mut st = ptr::null_mut();
        assert_eq!(qc_state_parse(ptr::null(), &mut st), QcStatus::NullPointer);
        assert_eq!(qc_state_parse(cstr("nonsense:3").as_ptr(), &mut st), QcStatus::Parse);
        assert!(st.is_null());
        let bad = [0xffu8, 0];
        assert_eq!(qc_state_parse(bad.as_ptr().cast(), &mut st), QcStatus::InvalidUtf8);
        let mut m = ptr::null_mut();
        assert_eq!(qc_model_from_json(cstr("{}").as_ptr(), &mut m), QcStatus::Validation);
        assert_eq!(qc_model_build(ptr::null(), ptr::null(), &mut m), QcStatus::NullPointer);
        assert!(qc_last_error().is_null() || !last_error().is_empty());
    }
}

#[test]
fn predicted_classes() {
    unsafe {
        let mut p = QcPredicted::Strong;
        for (poly, want) in [
            ("q1q2", QcPredicted::AtLeastLogical),
            ("q1+q2", QcPredicted::Strong),
            ("q1", QcPredicted::Weak),
            ("0", QcPredicted::NonContextual),
        ] {
            assert_eq!(qc_poly_predicted_class(cstr(poly).as_ptr(), &mut p), QcStatus::Ok, "{poly}");
            assert_eq!(p, want, "{poly}");
        }
        assert!(qc_last_error().is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qcontext.h")).unwrap();
    for name in [
        "qc_state_parse",
        "qc_state_free",
        "qc_model_build",
        "qc_model_to_json",
        "qc_model_from_json",
        "qc_classify",
        "qc_dicke_violation",
        "qc_poly_predicted_class",
        "qc_last_error",
        "qc_string_free",
        "QC_STATUS_SIZE_BOUND",
        "typedef struct QcModel QcModel",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let src = std::env::temp_dir().join(format!("qcontext_header_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"qcontext.h\"\nint main(void) { return qc_version() == 0; }\n").unwrap();
    let status = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-I", include]).arg(&src).status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; header compile check skipped"),
    }
}
