//! C ABI over `sic333`.
//!
//! Every fallible call returns a [`Sic333Status`]; on failure the message is
//! available from [`sic333_last_error`] on the same thread. Handles are
//! owned by the caller and released with the matching `_free` function.

// Pointer arguments are checked for null before use.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use serde::Serialize;

use sic333::clifford::{symplectic_unitary, zauner};
use sic333::modring::{
    classify_conjugacy, clifford_trace, dbar, is_canonical_order3, prime_conjugator, ScanLimit,
    SympMat,
};
use sic333::sicfid::{reconstruct_state, search_fiducial, verify_fiducial, SearchOptions};
use sic333::whgroup::displacement_lift;
use sic333::{CVector, Error, UMatrix};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sic333Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotCanonical = 3,
    VerificationFailed = 4,
    LimitExceeded = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Dense complex square matrix.
pub struct Sic333Matrix {
    inner: UMatrix,
}

/// JSON report plus its pass flag and, for searches, the fiducial vector.
pub struct Sic333Report {
    json: CString,
    passed: bool,
    vector: Option<CVector>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> Sic333Status {
    match e {
        Error::NotCanonical { .. } => Sic333Status::NotCanonical,
        Error::ScaleGuard { .. } => Sic333Status::LimitExceeded,
        Error::Verification(_)
        | Error::NotSic(_)
        | Error::Unclassified { .. }
        | Error::Decomposition(_) => Sic333Status::VerificationFailed,
        _ => Sic333Status::InvalidArgument,
    }
}

struct Fail(Sic333Status, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(Sic333Status::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> Sic333Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Sic333Status::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            Sic333Status::Panic
        }
    }
}

fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    // SAFETY: callers pass either null or a valid, writable pointer.
    unsafe { p.as_mut() }
        .ok_or_else(|| Fail(Sic333Status::NullPointer, "null output pointer".into()))
}

fn in_ref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    // SAFETY: callers pass either null or a pointer from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Fail(Sic333Status::NullPointer, "null handle".into()))
}

fn in_slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if p.is_null() {
        return Err(Fail(Sic333Status::NullPointer, "null input array".into()));
    }
    // SAFETY: callers guarantee `len` readable elements at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn check_dim(d: u64) -> Result<(), Fail> {
    if d == 0 {
        return Err(Error::ZeroDimension.into());
    }
    Ok(())
}

fn read_symp(d: u64, m: *const i64) -> Result<SympMat, Fail> {
    check_dim(d)?;
    let e = in_slice(m, 4)?;
    Ok(SympMat::new([e[0], e[1], e[2], e[3]], dbar(d))?)
}

/// Reads `d` interleaved `(re, im)` pairs.
fn read_vector(d: u64, re_im: *const f64) -> Result<CVector, Fail> {
    check_dim(d)?;
    let v = in_slice(re_im, 2 * d as usize)?;
    Ok(CVector::from_fn(d as usize, |i, _| {
        Complex64::new(v[2 * i], v[2 * i + 1])
    }))
}

fn boxed_matrix(out: *mut *mut Sic333Matrix, m: UMatrix) -> Result<(), Fail> {
    *out_ptr(out)? = Box::into_raw(Box::new(Sic333Matrix { inner: m }));
    Ok(())
}

fn boxed_report<T: Serialize>(
    out: *mut *mut Sic333Report,
    value: &T,
    passed: bool,
    vector: Option<CVector>,
) -> Result<(), Fail> {
    let slot = out_ptr(out)?;
    let text = serde_json::to_string(value).map_err(|e| invalid(e.to_string()))?;
    let json = CString::new(text).map_err(|e| invalid(e.to_string()))?;
    *slot = Box::into_raw(Box::new(Sic333Report {
        json,
        passed,
        vector,
    }));
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sic333_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `D_{(a1, a2)}` for the integer pair; for even `d` the phase depends on
/// the lift.
#[no_mangle]
pub extern "C" fn sic333_displacement(
    d: u64,
    a1: i64,
    a2: i64,
    out: *mut *mut Sic333Matrix,
) -> Sic333Status {
    guard(|| {
        check_dim(d)?;
        boxed_matrix(out, displacement_lift(a1, a2, d))
    })
}

/// Zauner's unitary with `𝔷³ = I`.
#[no_mangle]
pub extern "C" fn sic333_zauner(d: u64, out: *mut *mut Sic333Matrix) -> Sic333Status {
    guard(|| {
        check_dim(d)?;
        boxed_matrix(out, zauner(d))
    })
}

/// `A_M` for the row-major entries `m[0..4]`, reduced modulo d̄.
#[no_mangle]
pub extern "C" fn sic333_symplectic_unitary(
    d: u64,
    m: *const i64,
    out: *mut *mut Sic333Matrix,
) -> Sic333Status {
    guard(|| {
        let m = read_symp(d, m)?;
        boxed_matrix(out, symplectic_unitary(&m, d)?)
    })
}

/// Dimension of the matrix, 0 for a null handle.
#[no_mangle]
pub extern "C" fn sic333_matrix_dim(m: *const Sic333Matrix) -> usize {
    // SAFETY: null or a handle from this library.
    unsafe { m.as_ref() }.map_or(0, |m| m.inner.dim())
}

#[no_mangle]
pub extern "C" fn sic333_matrix_get(
    m: *const Sic333Matrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> Sic333Status {
    guard(|| {
        let m = in_ref(m)?;
        let n = m.inner.dim();
        if row >= n || col >= n {
            return Err(invalid(format!("index ({row}, {col}) outside {n}x{n}")));
        }
        let z = m.inner.get(row, col);
        *out_ptr(re)? = z.re;
        *out_ptr(im)? = z.im;
        Ok(())
    })
}

/// Copies the matrix row-major as interleaved `(re, im)` into `buf`, which
/// must hold `2·n²` doubles.
#[no_mangle]
pub extern "C" fn sic333_matrix_copy(
    m: *const Sic333Matrix,
    buf: *mut f64,
    len: usize,
) -> Sic333Status {
    guard(|| {
        let m = in_ref(m)?;
        let n = m.inner.dim();
        if len < 2 * n * n {
            return Err(Fail(
                Sic333Status::BufferTooSmall,
                format!("need {} doubles", 2 * n * n),
            ));
        }
        if buf.is_null() {
            return Err(Fail(Sic333Status::NullPointer, "null buffer".into()));
        }
        // SAFETY: checked non-null with at least 2n² slots.
        let out = unsafe { std::slice::from_raw_parts_mut(buf, 2 * n * n) };
        for r in 0..n {
            for c in 0..n {
                let z = m.inner.get(r, c);
                out[2 * (r * n + c)] = z.re;
                out[2 * (r * n + c) + 1] = z.im;
            }
        }
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn sic333_matrix_free(m: *mut Sic333Matrix) {
    if !m.is_null() {
        // SAFETY: produced by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Trace of `M` modulo `d`.
#[no_mangle]
pub extern "C" fn sic333_clifford_trace(d: u64, m: *const i64, out: *mut u64) -> Sic333Status {
    guard(|| {
        let m = read_symp(d, m)?;
        *out_ptr(out)? = clifford_trace(&m, d)?;
        Ok(())
    })
}

/// Conjugacy class of a canonical order-three matrix as a JSON report
/// `{"class", "representative", "lift", "certificate"}`.
#[no_mangle]
pub extern "C" fn sic333_classify(
    d: u64,
    m: *const i64,
    out: *mut *mut Sic333Report,
) -> Sic333Status {
    guard(|| {
        let m = read_symp(d, m)?;
        if !is_canonical_order3(&m, d) {
            return Err(Error::NotCanonical { d }.into());
        }
        let c = classify_conjugacy(&m, d, ScanLimit::from_env())?;
        boxed_report(out, &c, true, None)
    })
}

/// `S` with `S·M·S⁻¹ = M_𝔷` for prime `d > 3`, written row-major to `out[0..4]`.
#[no_mangle]
pub extern "C" fn sic333_prime_conjugator(d: u64, m: *const i64, out: *mut i64) -> Sic333Status {
    guard(|| {
        let m = read_symp(d, m)?;
        let s = prime_conjugator(&m, d)?;
        if out.is_null() {
            return Err(Fail(Sic333Status::NullPointer, "null output array".into()));
        }
        // SAFETY: caller provides four writable slots.
        let slots = unsafe { std::slice::from_raw_parts_mut(out, 4) };
        for (slot, e) in slots.iter_mut().zip(s.entries()) {
            *slot = e as i64;
        }
        Ok(())
    })
}

/// SIC check of the vector given as `d` interleaved `(re, im)` pairs.
/// A non-SIC input is not an error: the report's pass flag is false.
#[no_mangle]
pub extern "C" fn sic333_verify_fiducial(
    d: u64,
    re_im: *const f64,
    tol: f64,
    out: *mut *mut Sic333Report,
) -> Sic333Status {
    guard(|| {
        let v = read_vector(d, re_im)?;
        let r = verify_fiducial(&v, tol)?;
        let passed = r.is_sic;
        boxed_report(out, &r, passed, Some(v))
    })
}

/// Fiducial search, in the Zauner eigenspace when `use_zauner` is true and
/// over the whole sphere otherwise. `budget` and `restarts` of 0 keep the
/// defaults.
#[no_mangle]
pub extern "C" fn sic333_search_fiducial(
    d: u64,
    use_zauner: bool,
    seed: u64,
    budget: usize,
    restarts: usize,
    out: *mut *mut Sic333Report,
) -> Sic333Status {
    guard(|| {
        check_dim(d)?;
        let mut opts = SearchOptions {
            seed,
            ..Default::default()
        };
        if budget > 0 {
            opts.budget = budget;
        }
        if restarts > 0 {
            opts.restarts = restarts;
        }
        let m = use_zauner.then(|| SympMat::zauner(dbar(d)));
        let r = search_fiducial(d, m.as_ref(), &opts)?;
        let passed = r.is_sic && r.frame_residual <= r.tol;
        let v = r.vector.0.clone();
        boxed_report(out, &r, passed, Some(v))
    })
}

/// Reconstructs `ρ` from `d²` probabilities ordered `a = (a1, a2)` with
/// `a2` fastest. `condition` may be null.
#[no_mangle]
pub extern "C" fn sic333_reconstruct(
    d: u64,
    fiducial_re_im: *const f64,
    probabilities: *const f64,
    n_probabilities: usize,
    out: *mut *mut Sic333Matrix,
    condition: *mut f64,
) -> Sic333Status {
    guard(|| {
        let f = read_vector(d, fiducial_re_im)?;
        let p = in_slice(probabilities, n_probabilities)?;
        let r = reconstruct_state(p, &f)?;
        if !condition.is_null() {
            // SAFETY: non-null and writable per the contract.
            unsafe { *condition = r.condition_number };
        }
        boxed_matrix(out, r.rho)
    })
}

/// NUL-terminated JSON owned by the report.
#[no_mangle]
pub extern "C" fn sic333_report_json(r: *const Sic333Report) -> *const c_char {
    // SAFETY: null or a handle from this library.
    unsafe { r.as_ref() }.map_or(ptr::null(), |r| r.json.as_ptr())
}

#[no_mangle]
pub extern "C" fn sic333_report_passed(r: *const Sic333Report) -> bool {
    // SAFETY: null or a handle from this library.
    unsafe { r.as_ref() }.is_some_and(|r| r.passed)
}

/// Copies the report's vector as interleaved `(re, im)`; `len` counts doubles.
#[no_mangle]
pub extern "C" fn sic333_report_vector(
    r: *const Sic333Report,
    buf: *mut f64,
    len: usize,
) -> Sic333Status {
    guard(|| {
        let r = in_ref(r)?;
        let v = r
            .vector
            .as_ref()
            .ok_or_else(|| invalid("report carries no vector"))?;
        if len < 2 * v.len() {
            return Err(Fail(
                Sic333Status::BufferTooSmall,
                format!("need {} doubles", 2 * v.len()),
            ));
        }
        if buf.is_null() {
            return Err(Fail(Sic333Status::NullPointer, "null buffer".into()));
        }
        // SAFETY: checked non-null with enough slots.
        let out = unsafe { std::slice::from_raw_parts_mut(buf, 2 * v.len()) };
        for (i, z) in v.iter().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn sic333_report_free(r: *mut Sic333Report) {
    if !r.is_null() {
        // SAFETY: produced by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(r) });
    }
}
