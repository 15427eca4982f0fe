//! C ABI over the `phaseless` crate.
//!
//! Matrices and decisions are opaque handles created by `pl_*` constructors and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PlStatus`]; on failure a message is kept per thread and can be read with
//! [`pl_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phaseless::certificate::format_decision;
use phaseless::matrix::NonnegMatrix;
use phaseless::rank::{
    amoeba_membership, bracket, decide_nonmaximal, lower_bound_hadamard, typical_rank_bounds, Effort, RankDecision,
};
use phaseless::rational::{to_f64, RATIONALIZE_TOL};
use phaseless::Error;

/// Result codes. `PL_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    PlOk = 0,
    PlNullPointer = 1,
    PlInvalidArgument = 2,
    PlParseError = 3,
    PlNegativeEntry = 4,
    PlDimensionError = 5,
    PlCapabilityError = 6,
    PlDomainError = 7,
    PlBufferTooSmall = 8,
    PlInternalError = 9,
}

/// Opaque nonnegative rational matrix.
pub struct PlMatrix(NonnegMatrix);

/// Opaque result of a maximality decision.
pub struct PlDecision(RankDecision);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PlStatus {
    match e {
        Error::Parse { .. } => PlStatus::PlParseError,
        Error::NegativeEntry { .. } => PlStatus::PlNegativeEntry,
        Error::Dimension(_) => PlStatus::PlDimensionError,
        Error::Capability { .. } => PlStatus::PlCapabilityError,
        Error::Domain(_) | Error::Lopsided { .. } | Error::BoundInapplicable { .. } | Error::InvalidPolytope(_) => {
            PlStatus::PlDomainError
        }
        Error::WitnessInvalid(_) | Error::Inconsistent(_) => PlStatus::PlInternalError,
    }
}

fn fail(status: PlStatus, message: &str) -> PlStatus {
    set_error(message);
    status
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PlStatus>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::PlOk,
        Ok(Err(s)) => s,
        Err(_) => fail(PlStatus::PlInternalError, "panic inside the library"),
    }
}

fn lib<T>(r: phaseless::Result<T>) -> Result<T, PlStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, PlStatus> {
    p.as_ref().ok_or_else(|| fail(PlStatus::PlNullPointer, "null pointer argument"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, PlStatus> {
    p.as_mut().ok_or_else(|| fail(PlStatus::PlNullPointer, "null output pointer"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a matrix from `rows·cols` row-major doubles, rationalized at 1e-12.
///
/// # Safety
/// `data` must point to `rows·cols` readable doubles and `out_matrix` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pl_matrix_from_f64(
    rows: usize,
    cols: usize,
    data: *const f64,
    out_matrix: *mut *mut PlMatrix,
) -> PlStatus {
    guard(|| {
        let slot = out(out_matrix)?;
        if data.is_null() {
            return Err(fail(PlStatus::PlNullPointer, "null data"));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| fail(PlStatus::PlInvalidArgument, "size overflow"))?;
        let values = std::slice::from_raw_parts(data, len);
        let m = lib(NonnegMatrix::from_f64(rows, cols, values, RATIONALIZE_TOL))?;
        *slot = Box::into_raw(Box::new(PlMatrix(m)));
        Ok(())
    })
}

/// Parses matrix text: one row per line, comma-separated decimals or `p/q`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out_matrix` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_matrix_parse(text: *const c_char, out_matrix: *mut *mut PlMatrix) -> PlStatus {
    guard(|| {
        let slot = out(out_matrix)?;
        let s = CStr::from_ptr(deref(text)?).to_str().map_err(|_| fail(PlStatus::PlParseError, "text is not UTF-8"))?;
        let m = lib(NonnegMatrix::parse(s))?;
        *slot = Box::into_raw(Box::new(PlMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_matrix_rows(m: *const PlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_matrix_cols(m: *const PlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pl_matrix_free(m: *mut PlMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Decides maximality; the decision carries its certificate.
///
/// # Safety
/// `m` must be a live handle and `out_decision` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_decide(m: *const PlMatrix, out_decision: *mut *mut PlDecision) -> PlStatus {
    guard(|| {
        let slot = out(out_decision)?;
        let a = &deref(m)?.0;
        let d = lib(decide_nonmaximal(a))?;
        lib(d.verify(a))?;
        *slot = Box::into_raw(Box::new(PlDecision(d)));
        Ok(())
    })
}

/// 1 if nonmaximal, 0 if maximal, -1 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_decision_is_nonmaximal(d: *const PlDecision) -> c_int {
    d.as_ref().map_or(-1, |d| c_int::from(d.0.is_nonmaximal()))
}

/// Copies the weight vector of a nonmaximal decision into `buffer`. `written`
/// receives the length; `PL_BUFFER_TOO_SMALL` reports a short buffer, and a
/// maximal decision yields length 0.
///
/// # Safety
/// `buffer` must hold `capacity` doubles (or be null with capacity 0).
#[no_mangle]
pub unsafe extern "C" fn pl_decision_lambda(
    d: *const PlDecision,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> PlStatus {
    guard(|| {
        let n = out(written)?;
        let values: Vec<f64> = match &deref(d)?.0 {
            RankDecision::Nonmaximal { lambda, .. } => lambda.as_slice().iter().map(to_f64).collect(),
            RankDecision::Maximal { .. } => Vec::new(),
        };
        copy_out(&values, buffer, capacity, n)
    })
}

/// Copies the column permutation of a maximal decision into `buffer`, in the
/// same way as [`pl_decision_lambda`].
///
/// # Safety
/// `buffer` must hold `capacity` entries (or be null with capacity 0).
#[no_mangle]
pub unsafe extern "C" fn pl_decision_permutation(
    d: *const PlDecision,
    buffer: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> PlStatus {
    guard(|| {
        let n = out(written)?;
        let values = match &deref(d)?.0 {
            RankDecision::Maximal { permutation, .. } => permutation.clone(),
            RankDecision::Nonmaximal { .. } => Vec::new(),
        };
        copy_out(&values, buffer, capacity, n)
    })
}

unsafe fn copy_out<T: Copy>(
    values: &[T],
    buffer: *mut T,
    capacity: usize,
    written: &mut usize,
) -> Result<(), PlStatus> {
    *written = values.len();
    if values.is_empty() {
        return Ok(());
    }
    if capacity < values.len() {
        return Err(fail(PlStatus::PlBufferTooSmall, "buffer too small"));
    }
    if buffer.is_null() {
        return Err(fail(PlStatus::PlNullPointer, "null buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    Ok(())
}

/// The certificate as key-value text. Release with [`pl_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_decision_certificate(d: *const PlDecision, out_text: *mut *mut c_char) -> PlStatus {
    guard(|| {
        let slot = out(out_text)?;
        let text = format_decision(&deref(d)?.0);
        *slot = CString::new(text).expect("no interior nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pl_decision_free(d: *mut PlDecision) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn pl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Proven bounds `lower ≤ rank_θ ≤ upper`. `effort` 0 is low, anything else high.
///
/// # Safety
/// `m` must be a live handle; `lower` and `upper` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_bracket(
    m: *const PlMatrix,
    effort: c_int,
    seed: u64,
    lower: *mut usize,
    upper: *mut usize,
) -> PlStatus {
    guard(|| {
        let (lo, hi) = (out(lower)?, out(upper)?);
        let effort = if effort == 0 { Effort::Low } else { Effort::High };
        let b = lib(bracket(&deref(m)?.0, effort, seed))?;
        *lo = b.lower;
        *hi = b.upper;
        Ok(())
    })
}

/// `⌈√rank(A∘A)⌉`.
///
/// # Safety
/// `m` must be a live handle and `bound` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_hadamard_lower_bound(m: *const PlMatrix, bound: *mut usize) -> PlStatus {
    guard(|| {
        let slot = out(bound)?;
        *slot = lower_bound_hadamard(&deref(m)?.0);
        Ok(())
    })
}

/// Bounds on the typical phaseless rank of `n×m` matrices.
///
/// # Safety
/// `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_typical_rank_bounds(n: usize, m: usize, lower: *mut usize, upper: *mut usize) -> PlStatus {
    guard(|| {
        let (lo, hi) = (out(lower)?, out(upper)?);
        let (a, b) = lib(typical_rank_bounds(n, m))?;
        *lo = a;
        *hi = b;
        Ok(())
    })
}

/// Amoeba membership of a row-major point; `log_scale` nonzero means the
/// coordinates are logarithms. `member` receives 1 or 0.
///
/// # Safety
/// `point` must hold `rows·cols` doubles and `member` be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_amoeba_membership(
    point: *const f64,
    rows: usize,
    cols: usize,
    log_scale: c_int,
    member: *mut c_int,
) -> PlStatus {
    guard(|| {
        let slot = out(member)?;
        if point.is_null() {
            return Err(fail(PlStatus::PlNullPointer, "null point"));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| fail(PlStatus::PlInvalidArgument, "size overflow"))?;
        let coords = std::slice::from_raw_parts(point, len);
        *slot = c_int::from(lib(amoeba_membership(coords, rows, cols, log_scale != 0))?);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Parse { line: 1, message: String::new() }), PlStatus::PlParseError);
        assert_eq!(status_of(&Error::NegativeEntry { row: 0, col: 0 }), PlStatus::PlNegativeEntry);
        assert_eq!(status_of(&Error::Inconsistent(String::new())), PlStatus::PlInternalError);
    }

    #[test]
    fn errors_are_recorded_per_thread() {
        set_error("boom");
        let msg = unsafe { CStr::from_ptr(pl_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
        std::thread::spawn(|| assert!(pl_last_error_message().is_null())).join().unwrap();
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("no")), PlStatus::PlInternalError);
    }
}
