//! C interface to `nmk-core`.
//!
//! Every function returns an [`NmkStatus`]. On failure the message is kept
//! per thread and read with [`nmk_last_error`]. Graphs are opaque handles
//! released with [`nmk_graph_free`]; strings returned by the library are
//! released with [`nmk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nmk_core::cli::CliError;
use nmk_core::complex::{build_nm_complex, enumerate_family, FamilySpec, DEFAULT_ENUMERATION_CAP};
use nmk_core::graph::Graph;
use nmk_core::homology::{reduced_betti, FieldSpec};
use nmk_core::morse::verify_family;
use nmk_core::rainbow::{verify_theorem, RainbowError, RainbowInstance};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NmkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    CapExceeded = 4,
    BufferTooSmall = 5,
    Failed = 6,
    Panic = 7,
}

/// Opaque graph handle.
pub struct NmkGraph {
    graph: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(NmkStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e.exit_code() {
            2 => NmkStatus::Parse,
            3 => NmkStatus::CapExceeded,
            _ => NmkStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

fn fail<E: Into<CliError>>(e: E) -> Failure {
    Failure::from(e.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NmkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NmkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NmkStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(NmkStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(NmkStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn handle<'a>(g: *const NmkGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| Failure(NmkStatus::NullPointer, "null graph handle".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(NmkStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn field(p: *const c_char) -> Result<FieldSpec, Failure> {
    if p.is_null() {
        return Ok(FieldSpec::Gf2);
    }
    unsafe { text(p) }?.parse::<FieldSpec>().map_err(fail)
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(NmkStatus::Failed, "output contains a NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn nmk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an edge list: a vertex count line (`n`, or `n = a b` for a
/// bipartite graph), then one `u v` pair per line.
///
/// # Safety
/// `edge_list` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_graph_parse(edge_list: *const c_char, out: *mut *mut NmkGraph) -> NmkStatus {
    guard(|| {
        out_ptr(out)?;
        let graph = Graph::parse_edge_list(text(edge_list)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(NmkGraph { graph }));
        Ok(())
    })
}

/// The complete graph on `n` vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_graph_complete(n: usize, out: *mut *mut NmkGraph) -> NmkStatus {
    guard(|| {
        out_ptr(out)?;
        let graph = Graph::complete(n).map_err(fail)?;
        *out = Box::into_raw(Box::new(NmkGraph { graph }));
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nmk_graph_free(g: *mut NmkGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Size of a maximum matching.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_graph_matching_number(g: *const NmkGraph, out: *mut usize) -> NmkStatus {
    guard(|| {
        out_ptr(out)?;
        *out = handle(g)?.matching_number();
        Ok(())
    })
}

/// Reduced Betti numbers of `NM_k(g)` over `field_name` (`"gf2"`, `"gf<p>"` or
/// `"rational"`; NULL means GF(2)). `buf[i]` receives the number for
/// dimension `i - 1`, starting at dimension -1. `*len` is set to the number of
/// entries needed; if `cap` is smaller, nothing is written and the status is
/// `NMK_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `g` must be a live handle, `buf` must hold `cap` entries (or be NULL when
/// `cap` is 0) and `len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_betti(
    g: *const NmkGraph,
    k: usize,
    field_name: *const c_char,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> NmkStatus {
    guard(|| {
        out_ptr(len)?;
        let graph = handle(g)?;
        let f = field(field_name)?;
        let complex = build_nm_complex(graph, k, DEFAULT_ENUMERATION_CAP).map_err(fail)?;
        let table = reduced_betti(&complex, f).map_err(fail)?;
        let top = complex.dimension().unwrap_or(-1);
        let need = (top + 2) as usize;
        *len = need;
        if cap < need {
            return Err(Failure(NmkStatus::BufferTooSmall, format!("{need} entries needed")));
        }
        out_ptr(buf)?;
        for i in 0..need {
            *buf.add(i) = table.get(i as isize - 1);
        }
        Ok(())
    })
}

/// Runs the matching construction for a family given as JSON, writing the
/// verdict as JSON to `*out`. An empty family gives `"EMPTY_FAMILY"`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_morse_verify_json(
    spec_json: *const c_char,
    field_name: *const c_char,
    out: *mut *mut c_char,
) -> NmkStatus {
    guard(|| {
        out_ptr(out)?;
        let spec: FamilySpec =
            serde_json::from_str(text(spec_json)?).map_err(|e| Failure(NmkStatus::Parse, e.to_string()))?;
        spec.validate().map_err(|e| Failure(NmkStatus::Parse, e.to_string()))?;
        let f = field(field_name)?;
        let value = if enumerate_family(&spec, DEFAULT_ENUMERATION_CAP).map_err(fail)?.is_empty() {
            serde_json::json!({ "verdict": "EMPTY_FAMILY" })
        } else {
            let v = verify_family(&spec, f).map_err(fail)?;
            let passed = v.passed();
            let mut body = serde_json::to_value(&v).map_err(fail)?;
            body["verdict"] = serde_json::json!(if passed { "PASS" } else { "FAIL" });
            body
        };
        give_string(value.to_string(), out)
    })
}

/// Checks a rainbow instance (host edge list followed by `SET i: u v, ...`
/// lines) for a rainbow `k`-matching, writing the verdict as JSON to `*out`.
///
/// # Safety
/// `instance` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nmk_rainbow_verify_json(instance: *const c_char, k: usize, out: *mut *mut c_char) -> NmkStatus {
    guard(|| {
        out_ptr(out)?;
        let inst = RainbowInstance::parse(text(instance)?, k).map_err(fail)?;
        let value = match verify_theorem(&inst) {
            Ok(v) => serde_json::to_value(&v).map_err(fail)?,
            Err(RainbowError::Hypothesis(reason)) => serde_json::json!({ "verdict": "HYPOTHESIS_FAILED", "reason": reason }),
            Err(e) => return Err(fail(e)),
        };
        give_string(value.to_string(), out)
    })
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nmk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
