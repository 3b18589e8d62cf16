//! C ABI for the `pqscp` library.
//!
//! The surface follows the usual FFI conventions: an opaque solver handle
//! created per `(p, q)` pair, status codes instead of panics or unwinding,
//! big integers passed in and out as NUL-terminated decimal strings, and a
//! paired free function for every string the library allocates.
//!
//! A solver handle is not thread-safe; callers that share one across
//! threads must serialize access themselves.
//!
//! The matching header `include/pqscp.h` is generated by `cbindgen` from
//! this file at build time and committed alongside it.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use pqscp::{
    ell_value, g_frontier_scan, m_ell, run_fast, y_fast, z_fast, ConvergentTable, Error, EvalMode,
    Params,
};

/// Outcome of a call. Everything except `PQSCP_STATUS_OK` leaves the
/// output parameters untouched; the failure detail is readable through
/// `pqscp_solver_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqscpStatus {
    /// Success.
    Ok = 0,
    /// A numeric argument is outside its domain (for example `m = 0`).
    OutOfRange = 1,
    /// `p` and `q` are powers of a common base, so the theory collapses.
    DependentBases = 2,
    /// An enumeration exceeded its cap.
    CapExceeded = 3,
    /// An internal iteration budget was exhausted before convergence.
    BudgetExceeded = 4,
    /// Malformed input, for example a non-decimal `m` string.
    InvalidInput = 5,
    /// A required pointer argument was NULL.
    NullPointer = 6,
    /// An internal invariant failed; the solver is still usable.
    Panic = 7,
}

fn status_of(err: &Error) -> PqscpStatus {
    match err {
        Error::OutOfRange(_) => PqscpStatus::OutOfRange,
        Error::Dependent { .. } => PqscpStatus::DependentBases,
        Error::CapExceeded { .. } => PqscpStatus::CapExceeded,
        Error::BudgetExceeded(_) => PqscpStatus::BudgetExceeded,
        Error::InvalidInput(_) => PqscpStatus::InvalidInput,
    }
}

/// Opaque solver state: the base pair plus the lazily extended
/// continued-fraction table shared by all queries.
pub struct PqscpSolver {
    params: Params,
    table: ConvergentTable,
    last_error: Option<CString>,
}

impl PqscpSolver {
    fn record_error(&mut self, message: String) {
        let sanitized = message.replace('\0', " ");
        self.last_error = CString::new(sanitized).ok();
    }
}

/// Runs one fallible query, translating panics and errors into statuses
/// and recording the message on the solver.
fn guarded<T>(
    solver: &mut PqscpSolver,
    call: impl FnOnce(&mut PqscpSolver) -> pqscp::Result<T>,
    store: impl FnOnce(T),
) -> PqscpStatus {
    match catch_unwind(AssertUnwindSafe(|| call(solver))) {
        Ok(Ok(value)) => {
            solver.last_error = None;
            store(value);
            PqscpStatus::Ok
        }
        Ok(Err(err)) => {
            let status = status_of(&err);
            solver.record_error(err.to_string());
            status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            solver.record_error(format!("internal invariant failed: {detail}"));
            PqscpStatus::Panic
        }
    }
}

/// Parses a NUL-terminated decimal string into a big integer.
unsafe fn parse_m(m_decimal: *const c_char) -> pqscp::Result<BigUint> {
    let text = CStr::from_ptr(m_decimal)
        .to_str()
        .map_err(|_| Error::InvalidInput("m is not valid UTF-8".into()))?;
    BigUint::parse_bytes(text.trim().as_bytes(), 10)
        .ok_or_else(|| Error::InvalidInput(format!("cannot parse `{text}` as decimal digits")))
}

fn to_c_string(value: String) -> *mut c_char {
    CString::new(value)
        .expect("decimal strings contain no NUL")
        .into_raw()
}

/// Creates a solver for the base pair `(p, q)` and stores it in
/// `out_solver`. Returns `PQSCP_STATUS_OK` on success.
///
/// # Safety
///
/// `out_solver` must be a valid pointer. The returned handle must be
/// released with `pqscp_solver_free`.
#[no_mangle]
pub unsafe extern "C" fn pqscp_solver_new(
    p: u64,
    q: u64,
    out_solver: *mut *mut PqscpSolver,
) -> PqscpStatus {
    if out_solver.is_null() {
        return PqscpStatus::NullPointer;
    }
    match Params::new(p, q) {
        Ok(params) => {
            let solver = Box::new(PqscpSolver {
                params,
                table: ConvergentTable::new(params),
                last_error: None,
            });
            *out_solver = Box::into_raw(solver);
            PqscpStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Releases a solver created by `pqscp_solver_new`. A NULL handle is a
/// no-op.
///
/// # Safety
///
/// `solver` must be NULL or a handle returned by `pqscp_solver_new` that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn pqscp_solver_free(solver: *mut PqscpSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// The failure message of the most recent call on this solver, or NULL if
/// that call succeeded. The pointer stays valid until the next call on the
/// same solver.
///
/// # Safety
///
/// `solver` must be a live handle from `pqscp_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn pqscp_solver_last_error(solver: *const PqscpSolver) -> *const c_char {
    if solver.is_null() {
        return ptr::null();
    }
    match &(*solver).last_error {
        Some(message) => message.as_ptr(),
        None => ptr::null(),
    }
}

/// Computes the maximal weight `G(m)` and stores it as a freshly allocated
/// decimal string in `out_value` (release it with `pqscp_string_free`).
///
/// # Safety
///
/// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
/// and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pqscp_g(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_value: *mut *mut c_char,
) -> PqscpStatus {
    if solver.is_null() || m_decimal.is_null() || out_value.is_null() {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| {
            let m = parse_m(m_decimal)?;
            let y = y_fast(&mut s.table, &m, EvalMode::FixedPoint)?;
            Ok(pqscp::h(&s.params, y.a, y.b).to_string())
        },
        |value| *out_value = to_c_string(value),
    )
}

/// Computes `G(m)` with the frontier-scan oracle instead of the fast walk;
/// meant for cross-checking bindings. Output contract matches `pqscp_g`.
///
/// # Safety
///
/// As for `pqscp_g`.
#[no_mangle]
pub unsafe extern "C" fn pqscp_g_oracle(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_value: *mut *mut c_char,
) -> PqscpStatus {
    if solver.is_null() || m_decimal.is_null() || out_value.is_null() {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| {
            let m = parse_m(m_decimal)?;
            Ok(g_frontier_scan(&s.params, &m)?.0.to_string())
        },
        |value| *out_value = to_c_string(value),
    )
}

unsafe fn extreme_point(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_a: *mut u64,
    out_b: *mut u64,
    out_value: *mut *mut c_char,
    largest: bool,
) -> PqscpStatus {
    if solver.is_null()
        || m_decimal.is_null()
        || out_a.is_null()
        || out_b.is_null()
        || out_value.is_null()
    {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| {
            let m = parse_m(m_decimal)?;
            let point = if largest {
                z_fast(&mut s.table, &m, EvalMode::FixedPoint)?
            } else {
                y_fast(&mut s.table, &m, EvalMode::FixedPoint)?
            };
            Ok((point.a, point.b, s.params.part_value(point.a, point.b)))
        },
        |(a, b, value)| {
            *out_a = a;
            *out_b = b;
            *out_value = to_c_string(value.to_string());
        },
    )
}

/// Computes the largest frontier part `z_m = p^a q^b`: the exponents go to
/// `out_a` / `out_b` and the value, as a decimal string to be released
/// with `pqscp_string_free`, to `out_value`.
///
/// # Safety
///
/// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
/// and the three output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn pqscp_z(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_a: *mut u64,
    out_b: *mut u64,
    out_value: *mut *mut c_char,
) -> PqscpStatus {
    extreme_point(solver, m_decimal, out_a, out_b, out_value, true)
}

/// Computes the smallest maximal-weight witness `y_m = p^a q^b`; output
/// contract matches `pqscp_z`.
///
/// # Safety
///
/// As for `pqscp_z`.
#[no_mangle]
pub unsafe extern "C" fn pqscp_y(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_a: *mut u64,
    out_b: *mut u64,
    out_value: *mut *mut c_char,
) -> PqscpStatus {
    extreme_point(solver, m_decimal, out_a, out_b, out_value, false)
}

/// Computes the boundary exponent `ell_b`.
///
/// # Safety
///
/// `solver` must be a live handle and `out_ell` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pqscp_ell(
    solver: *mut PqscpSolver,
    b: u64,
    out_ell: *mut u64,
) -> PqscpStatus {
    if solver.is_null() || out_ell.is_null() {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| ell_value(&mut s.table, b),
        |ell| *out_ell = ell,
    )
}

/// Computes `m_ell`, the largest `b` whose boundary exponent still fits
/// under `m` (the budget of the `y` walk).
///
/// # Safety
///
/// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
/// and `out_m_ell` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pqscp_m_ell(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_m_ell: *mut u64,
) -> PqscpStatus {
    if solver.is_null() || m_decimal.is_null() || out_m_ell.is_null() {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| {
            let m = parse_m(m_decimal)?;
            m_ell(&mut s.table, &m)
        },
        |value| *out_m_ell = value,
    )
}

/// Runs the full-budget walk for `m` and reports how many iterations it
/// used next to the theoretical bound `2 + floor(log2 log_q m)`.
///
/// # Safety
///
/// `solver` must be a live handle, `m_decimal` a NUL-terminated string,
/// and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn pqscp_walk_iterations(
    solver: *mut PqscpSolver,
    m_decimal: *const c_char,
    out_iterations: *mut u64,
    out_bound: *mut u64,
) -> PqscpStatus {
    if solver.is_null() || m_decimal.is_null() || out_iterations.is_null() || out_bound.is_null() {
        return PqscpStatus::NullPointer;
    }
    let solver = &mut *solver;
    guarded(
        solver,
        |s| {
            let m = parse_m(m_decimal)?;
            let cap = s.params.floor_log_q(&m);
            let run = run_fast(&mut s.table, &m, cap, EvalMode::FixedPoint)?;
            let bound = if cap == 0 { 1 } else { 2 + u64::from(cap.ilog2()) };
            Ok((run.iterations, bound))
        },
        |(iterations, bound)| {
            *out_iterations = iterations;
            *out_bound = bound;
        },
    )
}

/// Releases a string allocated by this library. A NULL pointer is a no-op.
///
/// # Safety
///
/// `s` must be NULL or a string returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn pqscp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn pqscp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
