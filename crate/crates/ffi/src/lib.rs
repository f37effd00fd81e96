//! C ABI for the teaching-map toolkit. Handles are opaque pointers created
//! and released by the `nc_*_free` functions; all entry points return an
//! [`NcStatus`] and record a thread-local message retrievable through
//! [`nc_last_error_message`] on failure. Panics never cross the boundary;
//! they surface as `NcStatus::Internal`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nonclash::balls::BallFamily;
use nonclash::graph::Graph;
use nonclash::solver::{min_dimension, solve, SolveStatus};
use nonclash::teaching::{verify, TeachingMap};
use nonclash::vi::{fpt_solve, Retain};

/// Result codes for every ABI entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum NcStatus {
    /// Success (for decision calls: feasible).
    Ok = 0,
    /// The instance is infeasible at the requested dimension, or the map has
    /// conflicts.
    Infeasible = 1,
    /// Null pointer or otherwise invalid argument.
    InvalidArgument = 2,
    /// Input text failed to parse; see `nc_last_error_message`.
    ParseError = 3,
    /// Unexpected internal failure.
    Internal = 4,
}

pub struct NcGraph(Graph);
pub struct NcFamily(BallFamily);
pub struct NcMap(TeachingMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let owned = CString::new(msg.into()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

fn guarded<F: FnOnce() -> NcStatus>(f: F) -> NcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            NcStatus::Internal
        }
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char) -> Result<&'a str, NcStatus> {
    if ptr.is_null() {
        set_error("null text pointer");
        return Err(NcStatus::InvalidArgument);
    }
    std::ffi::CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("text is not valid UTF-8");
        NcStatus::InvalidArgument
    })
}

/// Parses the graph text format into a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_parse(text: *const c_char, out: *mut *mut NcGraph) -> NcStatus {
    if out.is_null() {
        set_error("null output pointer");
        return NcStatus::InvalidArgument;
    }
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(|| match Graph::from_text(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(NcGraph(g)));
            NcStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            NcStatus::ParseError
        }
    })
}

/// # Safety
/// `graph` must come from `nc_graph_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_free(graph: *mut NcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_vertex_count(graph: *const NcGraph) -> usize {
    graph.as_ref().map(|g| g.0.n()).unwrap_or(0)
}

/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nc_graph_edge_count(graph: *const NcGraph) -> usize {
    graph.as_ref().map(|g| g.0.m()).unwrap_or(0)
}

/// Builds the family of all balls of the graph.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_family_strict(
    graph: *const NcGraph,
    out: *mut *mut NcFamily,
) -> NcStatus {
    let Some(graph) = graph.as_ref() else {
        set_error("null graph");
        return NcStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NcStatus::InvalidArgument;
    }
    guarded(|| {
        *out = Box::into_raw(Box::new(NcFamily(BallFamily::strict(&graph.0))));
        NcStatus::Ok
    })
}

/// Parses the ball-family text format (either `STRICT` or center/radius
/// lines) against the graph.
///
/// # Safety
/// `graph` must be a live handle, `text` a valid NUL-terminated string, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_family_parse(
    graph: *const NcGraph,
    text: *const c_char,
    out: *mut *mut NcFamily,
) -> NcStatus {
    let Some(graph) = graph.as_ref() else {
        set_error("null graph");
        return NcStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NcStatus::InvalidArgument;
    }
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(|| match BallFamily::from_text(&graph.0, text) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(NcFamily(f)));
            NcStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            NcStatus::ParseError
        }
    })
}

/// # Safety
/// `family` must come from a family constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_family_free(family: *mut NcFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// # Safety
/// `family` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nc_family_ball_count(family: *const NcFamily) -> usize {
    family.as_ref().map(|f| f.0.len()).unwrap_or(0)
}

/// Searches for a teaching map of dimension at most `k`. On `Ok` and when
/// `out_map` is non-null, stores a fresh map handle there.
///
/// # Safety
/// `family` must be a live handle; `out_map` may be null.
#[no_mangle]
pub unsafe extern "C" fn nc_solve(
    family: *const NcFamily,
    k: usize,
    out_map: *mut *mut NcMap,
) -> NcStatus {
    let Some(family) = family.as_ref() else {
        set_error("null family");
        return NcStatus::InvalidArgument;
    };
    guarded(|| match solve(&family.0, k).status {
        SolveStatus::Found(map) => {
            if !out_map.is_null() {
                *out_map = Box::into_raw(Box::new(NcMap(map)));
            }
            NcStatus::Ok
        }
        SolveStatus::Infeasible => NcStatus::Infeasible,
    })
}

/// Least feasible dimension plus a witness map.
///
/// # Safety
/// `family` must be a live handle; `out_dimension` and `out_map` may be null.
#[no_mangle]
pub unsafe extern "C" fn nc_min_dimension(
    family: *const NcFamily,
    out_dimension: *mut usize,
    out_map: *mut *mut NcMap,
) -> NcStatus {
    let Some(family) = family.as_ref() else {
        set_error("null family");
        return NcStatus::InvalidArgument;
    };
    guarded(|| {
        let (dim, map) = min_dimension(&family.0);
        if !out_dimension.is_null() {
            *out_dimension = dim;
        }
        if !out_map.is_null() {
            *out_map = Box::into_raw(Box::new(NcMap(map)));
        }
        NcStatus::Ok
    })
}

/// Solves through the kernelization pipeline. `retain` = 0 selects the
/// provable retention bound; any other value keeps that many twins per class
/// (minimum 3).
///
/// # Safety
/// `family` must be a live handle; `out_map` may be null.
#[no_mangle]
pub unsafe extern "C" fn nc_fpt_solve(
    family: *const NcFamily,
    k: usize,
    retain: usize,
    out_map: *mut *mut NcMap,
) -> NcStatus {
    let Some(family) = family.as_ref() else {
        set_error("null family");
        return NcStatus::InvalidArgument;
    };
    let retain = if retain == 0 {
        Retain::PaperBound
    } else {
        Retain::Count(retain)
    };
    guarded(|| match fpt_solve(&family.0, k, &retain) {
        Ok(report) => match report.result.status {
            SolveStatus::Found(map) => {
                if !out_map.is_null() {
                    *out_map = Box::into_raw(Box::new(NcMap(map)));
                }
                NcStatus::Ok
            }
            SolveStatus::Infeasible => NcStatus::Infeasible,
        },
        Err(e) => {
            set_error(e.to_string());
            NcStatus::InvalidArgument
        }
    })
}

/// Checks the non-clashing condition; `Ok` when conflict-free, `Infeasible`
/// with the pair count in `out_conflicts` otherwise.
///
/// # Safety
/// `family` and `map` must be live handles; `out_conflicts` may be null.
#[no_mangle]
pub unsafe extern "C" fn nc_verify(
    family: *const NcFamily,
    map: *const NcMap,
    out_conflicts: *mut usize,
) -> NcStatus {
    let (Some(family), Some(map)) = (family.as_ref(), map.as_ref()) else {
        set_error("null argument");
        return NcStatus::InvalidArgument;
    };
    guarded(|| match verify(&family.0, &map.0) {
        Ok(conflicts) => {
            if !out_conflicts.is_null() {
                *out_conflicts = conflicts.len();
            }
            if conflicts.is_empty() {
                NcStatus::Ok
            } else {
                NcStatus::Infeasible
            }
        }
        Err(e) => {
            set_error(e.to_string());
            NcStatus::InvalidArgument
        }
    })
}

/// Parses a teaching-map JSON document against the family.
///
/// # Safety
/// `family` must be a live handle, `text` a valid NUL-terminated string, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nc_map_parse(
    family: *const NcFamily,
    text: *const c_char,
    out: *mut *mut NcMap,
) -> NcStatus {
    let Some(family) = family.as_ref() else {
        set_error("null family");
        return NcStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return NcStatus::InvalidArgument;
    }
    let text = match read_utf8(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guarded(|| match TeachingMap::from_json(&family.0, text) {
        Ok(map) => {
            *out = Box::into_raw(Box::new(NcMap(map)));
            NcStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            NcStatus::ParseError
        }
    })
}

/// Serializes a map to its JSON format; free the result with
/// `nc_string_free`. Returns null on failure.
///
/// # Safety
/// `family` and `map` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn nc_map_to_json(
    family: *const NcFamily,
    map: *const NcMap,
) -> *mut c_char {
    let (Some(family), Some(map)) = (family.as_ref(), map.as_ref()) else {
        set_error("null argument");
        return std::ptr::null_mut();
    };
    match catch_unwind(AssertUnwindSafe(|| map.0.to_json(&family.0))) {
        Ok(json) => CString::new(json)
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut()),
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `map` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nc_map_dimension(map: *const NcMap) -> usize {
    map.as_ref().map(|m| m.0.dimension()).unwrap_or(0)
}

/// # Safety
/// `map` must come from a map constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_map_free(map: *mut NcMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Releases a string returned by `nc_map_to_json`.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
