//! Exercises the C API through the exported symbols, including error
//! paths and memory ownership.

use conley_capi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    CString::new(p.to_str().unwrap()).unwrap()
}

unsafe fn take_string(p: *mut i8) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    conley_string_free(p);
    s
}

#[test]
fn analyze_and_figure_roundtrip() {
    unsafe {
        let mut sys: *mut ConleySystem = ptr::null_mut();
        let st = conley_system_new_from_config(fixture("doubling.json").as_ptr(), &mut sys);
        assert_eq!(st, ConleyStatus::ConleyStatusOk);
        assert!(!sys.is_null());

        let mut json: *mut i8 = ptr::null_mut();
        let st = conley_system_analyze_json(sys, &mut json);
        assert_eq!(st, ConleyStatus::ConleyStatusOk);
        let report = take_string(json);
        assert!(report.contains("\"schema\": \"conley-report/1\""));
        assert!(report.contains("\"char_poly\": \"x + -1\""));
        assert!(report.contains("\"char_poly\": \"x^2 + -1\""));

        let mut svg: *mut i8 = ptr::null_mut();
        let st = conley_system_figure_svg(sys, &mut svg);
        assert_eq!(st, ConleyStatus::ConleyStatusOk);
        let doc = take_string(svg);
        assert!(doc.starts_with("<svg"));
        assert!(doc.contains("</svg>"));

        // no failure recorded on this handle
        let mut err: *mut i8 = ptr::null_mut();
        assert_eq!(
            conley_system_last_error(sys, &mut err),
            ConleyStatus::ConleyStatusOk
        );
        assert!(err.is_null());

        conley_system_free(sys);
    }
}

#[test]
fn constructor_failure_reports_config_error() {
    unsafe {
        let bogus = CString::new("/nonexistent/config.json").unwrap();
        let mut sys: *mut ConleySystem = ptr::null_mut();
        let st = conley_system_new_from_config(bogus.as_ptr(), &mut sys);
        assert_eq!(st, ConleyStatus::ConleyStatusConfig);
        assert!(sys.is_null());

        let mut err: *mut i8 = ptr::null_mut();
        assert_eq!(conley_last_error(&mut err), ConleyStatus::ConleyStatusOk);
        let msg = take_string(err);
        assert!(!msg.is_empty());
    }
}

#[test]
fn isolation_failure_surfaces_status_and_message() {
    // the whole periodic circle cannot isolate: its invariant part is the
    // entire phase space
    let dir = std::env::temp_dir().join("conley-capi-ffi");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/doubling.csv"),
        dir.join("doubling.csv"),
    )
    .unwrap();
    let cfg = dir.join("whole.json");
    std::fs::write(
        &cfg,
        r#"{
  "grid": {
    "dimension": 1,
    "axes": [ { "periodic": true, "period": "1" } ],
    "cell_width": "1/16",
    "offset": "0",
    "refinement": 4
  },
  "samples": { "path": "doubling.csv" },
  "neighbourhoods": { "whole": "[0, 1]" },
  "coefficients": "q"
}"#,
    )
    .unwrap();
    unsafe {
        let path = CString::new(cfg.to_str().unwrap()).unwrap();
        let mut sys: *mut ConleySystem = ptr::null_mut();
        assert_eq!(
            conley_system_new_from_config(path.as_ptr(), &mut sys),
            ConleyStatus::ConleyStatusOk
        );
        let mut json: *mut i8 = ptr::null_mut();
        let st = conley_system_analyze_json(sys, &mut json);
        assert_eq!(st, ConleyStatus::ConleyStatusIsolation);
        let report = take_string(json);
        assert!(report.contains("whole phase space"));

        let mut err: *mut i8 = ptr::null_mut();
        assert_eq!(
            conley_system_last_error(sys, &mut err),
            ConleyStatus::ConleyStatusOk
        );
        let msg = take_string(err);
        assert!(msg.contains("isolat"), "unexpected message: {msg}");
        conley_system_free(sys);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut sys: *mut ConleySystem = ptr::null_mut();
        assert_eq!(
            conley_system_new_from_config(ptr::null(), &mut sys),
            ConleyStatus::ConleyStatusNullPointer
        );
        let mut out: *mut i8 = ptr::null_mut();
        assert_eq!(
            conley_system_analyze_json(ptr::null_mut(), &mut out),
            ConleyStatus::ConleyStatusNullPointer
        );
        assert_eq!(
            conley_system_figure_svg(ptr::null_mut(), &mut out),
            ConleyStatus::ConleyStatusNullPointer
        );
        assert_eq!(
            conley_last_error(ptr::null_mut()),
            ConleyStatus::ConleyStatusNullPointer
        );
        // frees tolerate null
        conley_system_free(ptr::null_mut());
        conley_string_free(ptr::null_mut());
    }
}

#[test]
fn status_messages_are_static_strings() {
    for st in [
        ConleyStatus::ConleyStatusOk,
        ConleyStatus::ConleyStatusInternal,
        ConleyStatus::ConleyStatusConfig,
        ConleyStatus::ConleyStatusIsolation,
        ConleyStatus::ConleyStatusPair,
        ConleyStatus::ConleyStatusExcision,
        ConleyStatus::ConleyStatusNullPointer,
        ConleyStatus::ConleyStatusUtf8,
    ] {
        let p = conley_status_message(st);
        assert!(!p.is_null());
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap();
        assert!(!s.is_empty());
    }
}
