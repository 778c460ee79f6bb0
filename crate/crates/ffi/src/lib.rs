//! C ABI over `thrackle-core`.
//!
//! Every function returns a [`ThrStatus`]; results come back through out
//! pointers. On failure, `thr_last_error` describes the problem until the next
//! call on the same thread. Strings returned to the caller are released with
//! `thr_string_free`, drawings with `thr_drawing_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thrackle_core::bisection::{bisection_width_exact, bisection_width_heuristic, AbstractGraph};
use thrackle_core::drawing::{classify_drawing, is_simple, pair_table, validate, Drawing};
use thrackle_core::ds::{euler_density_check, is_ds_sequence, lambda3_upper, lambda_brute};
use thrackle_core::extremal::has_disjoint_biclique;
use thrackle_core::io::{drawing_from_json, drawing_to_json};
use thrackle_core::transforms::{alpha, perturb_tangencies, split_vertices, strip_crossing_formula, strip_redraw};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidDrawing = 4,
    InvalidArgument = 5,
    Failed = 6,
    Panic = 7,
}

/// Opaque drawing handle.
pub struct ThrDrawing {
    inner: Drawing,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

type Res<T> = Result<T, (ThrStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> ThrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThrStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            ThrStatus::Panic
        }
    }
}

fn failed(e: impl std::fmt::Display) -> (ThrStatus, String) {
    (ThrStatus::Failed, e.to_string())
}

fn null(what: &str) -> (ThrStatus, String) {
    (ThrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn drawing<'a>(d: *const ThrDrawing) -> Res<&'a Drawing> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| null("drawing"))
}

unsafe fn out<'a, T>(p: *mut T) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| null("output pointer"))
}

fn checked(d: &Drawing) -> Res<()> {
    let r = validate(d);
    if r.is_valid() {
        Ok(())
    } else {
        let msg = r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        Err((ThrStatus::InvalidDrawing, msg))
    }
}

fn boxed(d: Drawing) -> *mut ThrDrawing {
    Box::into_raw(Box::new(ThrDrawing { inner: d }))
}

fn c_string(s: String) -> Res<*mut c_char> {
    CString::new(s).map(CString::into_raw).map_err(|e| (ThrStatus::Failed, e.to_string()))
}

/// Message for the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn thr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn thr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a drawing document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_d` must be writable.
#[no_mangle]
pub unsafe extern "C" fn thr_drawing_from_json(json: *const c_char, out_d: *mut *mut ThrDrawing) -> ThrStatus {
    guard(|| {
        let slot = out(out_d)?;
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| (ThrStatus::InvalidUtf8, e.to_string()))?;
        let d = drawing_from_json(text).map_err(|e| (ThrStatus::Parse, e.to_string()))?;
        *slot = boxed(d);
        Ok(())
    })
}

/// # Safety
/// `d` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn thr_drawing_free(d: *mut ThrDrawing) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// Pointers must be valid; the string is released with `thr_string_free`.
#[no_mangle]
pub unsafe extern "C" fn thr_drawing_to_json(d: *const ThrDrawing, out_json: *mut *mut c_char) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        *out(out_json)? = c_string(drawing_to_json(d))?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_drawing_counts(d: *const ThrDrawing, n: *mut usize, m: *mut usize) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        *out(n)? = d.n();
        *out(m)? = d.m();
        Ok(())
    })
}

/// Writes the number of violations; zero means the drawing is valid.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_validate(d: *const ThrDrawing, violations: *mut usize) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        *out(violations)? = validate(d).violations.len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_classify(
    d: *const ThrDrawing,
    is_thrackle: *mut bool,
    is_tangled_thrackle: *mut bool,
    is_simple_out: *mut bool,
) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        checked(d)?;
        let f = classify_drawing(d);
        *out(is_thrackle)? = f.is_thrackle;
        *out(is_tangled_thrackle)? = f.is_tangled_thrackle;
        *out(is_simple_out)? = is_simple(d);
        Ok(())
    })
}

/// Pair table as JSON.
///
/// # Safety
/// Pointers must be valid; the string is released with `thr_string_free`.
#[no_mangle]
pub unsafe extern "C" fn thr_pair_table_json(d: *const ThrDrawing, out_json: *mut *mut c_char) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        checked(d)?;
        let pairs: Vec<_> = pair_table(d)
            .classes
            .into_iter()
            .map(|((a, b), c)| serde_json::json!({"e": a, "f": b, "class": c}))
            .collect();
        *out(out_json)? = c_string(serde_json::Value::Array(pairs).to_string())?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_has_disjoint_biclique(d: *const ThrDrawing, t: usize, found: *mut bool) -> ThrStatus {
    guard(|| {
        let d = drawing(d)?;
        checked(d)?;
        *out(found)? = has_disjoint_biclique(d, t).map_err(failed)?.is_some();
        Ok(())
    })
}

/// Splits vertices of degree above `delta`; the result is a new handle.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_split(d: *const ThrDrawing, delta: usize, out_d: *mut *mut ThrDrawing) -> ThrStatus {
    guard(|| {
        let slot = out(out_d)?;
        let (s, _) = split_vertices(drawing(d)?, delta).map_err(failed)?;
        *slot = boxed(s);
        Ok(())
    })
}

/// Removes tangencies; the result is a new handle.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_perturb(d: *const ThrDrawing, out_d: *mut *mut ThrDrawing) -> ThrStatus {
    guard(|| {
        let slot = out(out_d)?;
        *slot = boxed(perturb_tangencies(drawing(d)?).map_err(failed)?);
        Ok(())
    })
}

/// Strip redrawing of a labelled bipartite drawing, returned as JSON.
///
/// # Safety
/// Pointers must be valid; the string is released with `thr_string_free`.
#[no_mangle]
pub unsafe extern "C" fn thr_strip_redraw(
    d: *const ThrDrawing,
    parity_holds: *mut bool,
    out_json: *mut *mut c_char,
) -> ThrStatus {
    guard(|| {
        let r = strip_redraw(drawing(d)?).map_err(failed)?;
        *out(parity_holds)? = r.parity_holds();
        let text = serde_json::to_string(&r).map_err(failed)?;
        *out(out_json)? = c_string(text)?;
        Ok(())
    })
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_strip_crossing_formula(k1: u64, k2: u64, result: *mut u64) -> ThrStatus {
    guard(|| {
        *out(result)? = strip_crossing_formula(k1, k2);
        Ok(())
    })
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_alpha(t: u64, result: *mut f64) -> ThrStatus {
    guard(|| {
        if t == 0 {
            return Err((ThrStatus::InvalidArgument, "t must be positive".into()));
        }
        *out(result)? = alpha(t);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn thr_lambda3_upper(n: u64) -> f64 {
    lambda3_upper(n)
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_euler_density_check(k: u64, ratio: *mut f64, contradiction: *mut bool) -> ThrStatus {
    guard(|| {
        let (r, c) = euler_density_check(k);
        *out(ratio)? = r;
        *out(contradiction)? = c;
        Ok(())
    })
}

/// # Safety
/// `seq` must point to `len` readable values (may be null when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn thr_is_ds_sequence(seq: *const u32, len: usize, s: usize, result: *mut bool) -> ThrStatus {
    guard(|| {
        let u: &[u32] = if len == 0 {
            &[]
        } else if seq.is_null() {
            return Err(null("seq"));
        } else {
            std::slice::from_raw_parts(seq, len)
        };
        *out(result)? = is_ds_sequence(u, s);
        Ok(())
    })
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn thr_lambda_brute(n: usize, s: usize, result: *mut usize) -> ThrStatus {
    guard(|| {
        let v = lambda_brute(n, s).map_err(|e| (ThrStatus::InvalidArgument, e.to_string()))?;
        *out(result)? = v;
        Ok(())
    })
}

/// Bisection width of the graph on `n` vertices whose edges are the pairs
/// `(edges[2i], edges[2i+1])`. Exact when `exact` is set, otherwise the
/// seeded heuristic.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (may be null when `m` is 0).
#[no_mangle]
pub unsafe extern "C" fn thr_bisection_width(
    n: usize,
    edges: *const u32,
    m: usize,
    exact: bool,
    seed: u64,
    width: *mut usize,
) -> ThrStatus {
    guard(|| {
        let raw: &[u32] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let list = raw.chunks(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
        let g = AbstractGraph::new(n, list).map_err(|e| (ThrStatus::InvalidArgument, e.to_string()))?;
        let r = if exact { bisection_width_exact(&g) } else { bisection_width_heuristic(&g, seed) }.map_err(failed)?;
        *out(width)? = r.width;
        Ok(())
    })
}
