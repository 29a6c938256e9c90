//! C interface to the energy-stability solver.
//!
//! Problems are opaque handles created with [`mhdes_problem_new`] and released
//! with [`mhdes_problem_free`]. Every fallible call returns an
//! [`MhdesStatus`]; the message of the most recent failure on the calling
//! thread is available from [`mhdes_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mhdes::critical::{self, SearchWindow};
use mhdes::error::Error;
use mhdes::orr_evp::OrrProblem;
use mhdes::params::{FlowKind, Params};
use mhdes::verify;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhdesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Consistency = 4,
    Overflow = 5,
    NoRealEigenvalue = 6,
    Numerical = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhdesFlow {
    Couette = 0,
    Hartmann = 1,
}

/// Result of a critical-point search.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MhdesNeutralPoint {
    pub a_crit: f64,
    pub re_e: f64,
    /// Nonzero unless the minimum sits on the edge of the search window.
    pub converged: i32,
}

/// Opaque solver state for one `(flow, Ha, Pm, N)`.
pub struct MhdesProblem {
    inner: OrrProblem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> MhdesStatus {
    match e {
        Error::Domain(_) => MhdesStatus::Domain,
        Error::Consistency(_) => MhdesStatus::Consistency,
        Error::Overflow { .. } => MhdesStatus::Overflow,
        Error::NoRealEigenvalue { .. } => MhdesStatus::NoRealEigenvalue,
        _ => MhdesStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), MhdesStatus>>(f: F) -> MhdesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MhdesStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            MhdesStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, MhdesStatus>;
}

impl<T> OrStatus<T> for mhdes::error::Result<T> {
    fn or_status(self) -> Result<T, MhdesStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), MhdesStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        Err(MhdesStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn flow_from(flow: i32) -> Result<FlowKind, MhdesStatus> {
    match flow {
        0 => Ok(FlowKind::Couette),
        1 => Ok(FlowKind::Hartmann),
        other => {
            set_error(format!("unknown flow code {other}"));
            Err(MhdesStatus::InvalidArgument)
        }
    }
}

/// Creates a problem handle. `flow` is an [`MhdesFlow`] value.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn mhdes_problem_new(
    flow: i32,
    ha: f64,
    pm: f64,
    n: usize,
    out: *mut *mut MhdesProblem,
) -> MhdesStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let params = Params::new(flow_from(flow)?, ha, pm).or_status()?;
        let inner = OrrProblem::new(params, n).or_status()?;
        *out = Box::into_raw(Box::new(MhdesProblem { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `problem` must be null or a handle from [`mhdes_problem_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn mhdes_problem_free(problem: *mut MhdesProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Largest eigenvalue `m(a)`; the energy Reynolds number at `a` is `1/m`.
///
/// # Safety
/// `problem` must be a live handle and `m_out` writable.
#[no_mangle]
pub unsafe extern "C" fn mhdes_problem_solve(problem: *const MhdesProblem, a: f64, m_out: *mut f64) -> MhdesStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(m_out, "m_out")?;
        let sol = (*problem).inner.solve(a).or_status()?;
        *m_out = sol.m;
        Ok(())
    })
}

/// `Re(a)` at `len` wavenumbers. Failed points are written as NaN and the
/// call still succeeds.
///
/// # Safety
/// `a` and `re_out` must each point to `len` elements.
#[no_mangle]
pub unsafe extern "C" fn mhdes_problem_curve(
    problem: *const MhdesProblem,
    a: *const f64,
    len: usize,
    re_out: *mut f64,
) -> MhdesStatus {
    guard(|| {
        non_null(problem, "problem")?;
        if len == 0 {
            return Ok(());
        }
        non_null(a, "a")?;
        non_null(re_out, "re_out")?;
        let grid = slice::from_raw_parts(a, len);
        let out = slice::from_raw_parts_mut(re_out, len);
        if grid.iter().any(|v| !(v.is_finite() && *v != 0.0)) {
            set_error("wavenumbers must be finite and nonzero".into());
            return Err(MhdesStatus::Domain);
        }
        for (dst, p) in out.iter_mut().zip((*problem).inner.curve(grid)) {
            *dst = p.re;
        }
        Ok(())
    })
}

/// Minimum of `Re(a)` over `[a_min, a_max]`.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mhdes_problem_neutral(
    problem: *const MhdesProblem,
    a_min: f64,
    a_max: f64,
    out: *mut MhdesNeutralPoint,
) -> MhdesStatus {
    guard(|| {
        non_null(problem, "problem")?;
        non_null(out, "out")?;
        let window = SearchWindow::new(a_min, a_max).or_status()?;
        let p = critical::minimize(&(*problem).inner, &window).or_status()?;
        *out = MhdesNeutralPoint {
            a_crit: p.a_crit,
            re_e: p.re_e,
            converged: p.converged as i32,
        };
        Ok(())
    })
}

/// Richardson-extrapolated finite-difference estimate of `m(a)` from `points`
/// and `2 points` interior grid points.
///
/// # Safety
/// `m_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mhdes_fd_oracle(
    flow: i32,
    ha: f64,
    pm: f64,
    a: f64,
    points: usize,
    m_out: *mut f64,
) -> MhdesStatus {
    guard(|| {
        non_null(m_out, "m_out")?;
        let params = Params::new(flow_from(flow)?, ha, pm).or_status()?;
        *m_out = verify::fd_oracle(&params, a, points).or_status()?.m_extrapolated;
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn mhdes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mhdes_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
