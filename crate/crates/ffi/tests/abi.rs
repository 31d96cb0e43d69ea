use std::ffi::{CStr, CString};
use std::ptr;

use nmk_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { nmk_string_free(s) };
    out
}

fn last_error() -> String {
    let p = nmk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn betti_of_k4() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { nmk_graph_complete(4, &mut g) }, NmkStatus::Ok);
    let mut nu = 0;
    assert_eq!(unsafe { nmk_graph_matching_number(g, &mut nu) }, NmkStatus::Ok);
    assert_eq!(nu, 2);

    let mut len = 0;
    let status = unsafe { nmk_betti(g, 2, ptr::null(), ptr::null_mut(), 0, &mut len) };
    assert_eq!(status, NmkStatus::BufferTooSmall);
    let mut buf = vec![99usize; len];
    let field = CString::new("gf65521").unwrap();
    assert_eq!(unsafe { nmk_betti(g, 2, field.as_ptr(), buf.as_mut_ptr(), buf.len(), &mut len) }, NmkStatus::Ok);
    // Dimensions -1, 0, 1, 2: only the 2-sphere class survives.
    assert_eq!(buf, vec![0, 0, 0, 1]);
    unsafe { nmk_graph_free(g) };
}

#[test]
fn parse_errors_are_reported() {
    let mut g = ptr::null_mut();
    let bad = CString::new("three\n0 1\n").unwrap();
    assert_eq!(unsafe { nmk_graph_parse(bad.as_ptr(), &mut g) }, NmkStatus::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("line 1"));

    assert_eq!(unsafe { nmk_graph_parse(ptr::null(), &mut g) }, NmkStatus::NullPointer);
    let mut nu = 0;
    assert_eq!(unsafe { nmk_graph_matching_number(ptr::null(), &mut nu) }, NmkStatus::NullPointer);

    let ok = CString::new("3\n0 1\n1 2\n").unwrap();
    assert_eq!(unsafe { nmk_graph_parse(ok.as_ptr(), &mut g) }, NmkStatus::Ok);
    assert!(nmk_last_error().is_null());
    let bad_field = CString::new("gf4").unwrap();
    let mut len = 0;
    let status = unsafe { nmk_betti(g, 1, bad_field.as_ptr(), ptr::null_mut(), 0, &mut len) };
    assert_eq!(status, NmkStatus::Parse);
    unsafe { nmk_graph_free(g) };
    unsafe { nmk_graph_free(ptr::null_mut()) };
}

#[test]
fn morse_verify_json() {
    let spec = CString::new(r#"{"kind":"PM","vertices":[0,1,2,3],"h":[]}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nmk_morse_verify_json(spec.as_ptr(), ptr::null(), &mut out) }, NmkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["verdict"], "PASS");

    let empty = CString::new(r#"{"kind":"BFC","x":[0],"y":[1],"z":[],"h":[]}"#).unwrap();
    assert_eq!(unsafe { nmk_morse_verify_json(empty.as_ptr(), ptr::null(), &mut out) }, NmkStatus::Ok);
    assert!(take(out).contains("EMPTY_FAMILY"));

    let junk = CString::new("{").unwrap();
    assert_eq!(unsafe { nmk_morse_verify_json(junk.as_ptr(), ptr::null(), &mut out) }, NmkStatus::Parse);
}

#[test]
fn rainbow_verify_json() {
    let inst = CString::new("4\n0 1\n1 2\n2 3\n0 3\nSET 1: 0 1, 2 3\nSET 2: 1 2, 0 3\nSET 3: 0 1, 2 3\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nmk_rainbow_verify_json(inst.as_ptr(), 2, &mut out) }, NmkStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["verdict"], "SATISFIED");

    let short = CString::new("4\n0 1\n2 3\nSET 1: 0 1, 2 3\n").unwrap();
    assert_eq!(unsafe { nmk_rainbow_verify_json(short.as_ptr(), 2, &mut out) }, NmkStatus::Ok);
    assert!(take(out).contains("HYPOTHESIS_FAILED"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/nmk.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["nmk_last_error", "nmk_graph_parse", "nmk_betti", "nmk_morse_verify_json", "nmk_rainbow_verify_json", "nmk_string_free"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
