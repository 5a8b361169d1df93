//! C ABI over the reduction compiler and solvers.
//!
//! Objects are opaque handles created by `sf_*_parse`/`sf_reduce`/`sf_bundle_read`
//! and released with the matching `_free`. Every fallible call returns an
//! `SfStatus`; on failure `sf_last_error` describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sethforge::bundle::{read_bundle, write_bundle};
use sethforge::formula::{brute_force_sat, parse_dimacs, CnfFormula};
use sethforge::reductions::{reduce, Instance, Problem, ReductionError};
use sethforge::solvers::{brute_force, solve_instance, DpOptions, SolveError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DegenerateInput = 4,
    InvalidParameter = 5,
    SizeCap = 6,
    StateCap = 7,
    Solver = 8,
    Io = 9,
    InvalidBundle = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfOracle {
    Dp = 0,
    Brute = 1,
}

/// Opaque CNF formula.
pub struct SfFormula(CnfFormula);

/// Opaque reduced instance.
pub struct SfInstance(Instance);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SfInstanceInfo {
    pub vertices: usize,
    pub edges: usize,
    /// Width of the shipped decomposition.
    pub width: usize,
    pub width_bound: usize,
    pub has_target: bool,
    pub target: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SfAnswer {
    /// Whether the optimum meets the instance target.
    pub verdict: bool,
    pub has_optimum: bool,
    pub optimum: i64,
    pub max_states: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(SfStatus, String);

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        let status = match e {
            ReductionError::Degenerate(_) => SfStatus::DegenerateInput,
            ReductionError::SizeCap(_) => SfStatus::SizeCap,
            _ => SfStatus::InvalidParameter,
        };
        Failure(status, e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let status = match e {
            SolveError::StateCap { .. } => SfStatus::StateCap,
            SolveError::CapExceeded { .. } => SfStatus::SizeCap,
            _ => SfStatus::Solver,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SfStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(SfStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(SfStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(SfStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(SfStatus::NullPointer, "null handle".into()))
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses DIMACS CNF text.
///
/// # Safety
/// `dimacs` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_formula_parse(dimacs: *const c_char, out: *mut *mut SfFormula) -> SfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let phi = parse_dimacs(text(dimacs)?).map_err(|e| Failure(SfStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(SfFormula(phi)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from `sf_formula_parse` and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_formula_free(f: *mut SfFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Exhaustive satisfiability check (at most 24 variables).
///
/// # Safety
/// `f` must be a live formula handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_formula_satisfiable(f: *const SfFormula, out: *mut bool) -> SfStatus {
    guard(|| {
        let phi = &handle(f)?.0;
        let sat = brute_force_sat(phi).map_err(|e| Failure(SfStatus::SizeCap, e.to_string()))?;
        *out_ptr(out)? = sat.is_some();
        Ok(())
    })
}

/// Reduces a formula. `problem` is one of is, ds, maxcut, qcol, qlist, oct,
/// packing, partition.
///
/// # Safety
/// `f` must be a live formula handle, `problem` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_reduce(
    f: *const SfFormula,
    problem: *const c_char,
    p: u32,
    q: u32,
    out: *mut *mut SfInstance,
) -> SfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let phi = &handle(f)?.0;
        let name = text(problem)?;
        let problem = Problem::from_name(name)
            .ok_or_else(|| Failure(SfStatus::InvalidParameter, format!("unknown problem {name:?}")))?;
        let inst = reduce(problem, phi, p, q)?;
        *out = Box::into_raw(Box::new(SfInstance(inst)));
        Ok(())
    })
}

/// # Safety
/// `i` must come from `sf_reduce` or `sf_bundle_read` and not be used
/// afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sf_instance_free(i: *mut SfInstance) {
    if !i.is_null() {
        drop(Box::from_raw(i));
    }
}

/// # Safety
/// `i` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_instance_info(i: *const SfInstance, out: *mut SfInstanceInfo) -> SfStatus {
    guard(|| {
        let inst = &handle(i)?.0;
        *out_ptr(out)? = SfInstanceInfo {
            vertices: inst.graph.num_vertices(),
            edges: inst.graph.num_edges(),
            width: inst.decomposition.width(),
            width_bound: inst.claimed_width_bound,
            has_target: inst.target.is_some(),
            target: inst.target.unwrap_or(0),
        };
        Ok(())
    })
}

/// Solves with the decomposition DP or the brute-force oracle. `state_cap`
/// of 0 keeps the default memory cap.
///
/// # Safety
/// `i` must be a live instance handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_solve(
    i: *const SfInstance,
    oracle: SfOracle,
    state_cap: usize,
    out: *mut SfAnswer,
) -> SfStatus {
    guard(|| {
        let inst = &handle(i)?.0;
        let out = out_ptr(out)?;
        let a = match oracle {
            SfOracle::Dp => {
                let mut opts = DpOptions::default();
                if state_cap > 0 {
                    opts.state_cap = state_cap;
                }
                solve_instance(inst, &opts)?
            }
            SfOracle::Brute => brute_force(inst)?,
        };
        *out = SfAnswer {
            verdict: a.verdict,
            has_optimum: a.optimum.is_some(),
            optimum: a.optimum.unwrap_or(0),
            max_states: a.stats.max_states,
        };
        Ok(())
    })
}

/// Writes `dir/name.{gr,td,json}`.
///
/// # Safety
/// `i` must be a live instance handle; `dir` and `name` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn sf_bundle_write(i: *const SfInstance, dir: *const c_char, name: *const c_char) -> SfStatus {
    guard(|| {
        let inst = &handle(i)?.0;
        write_bundle(inst, Path::new(text(dir)?), text(name)?).map_err(bundle_failure)?;
        Ok(())
    })
}

/// Reads a bundle from any of its files or their common stem.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_bundle_read(path: *const c_char, out: *mut *mut SfInstance) -> SfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let inst = read_bundle(Path::new(text(path)?)).map_err(bundle_failure)?;
        *out = Box::into_raw(Box::new(SfInstance(inst)));
        Ok(())
    })
}

fn bundle_failure(e: sethforge::bundle::BundleError) -> Failure {
    let status = if e.category() == "io" { SfStatus::Io } else { SfStatus::InvalidBundle };
    Failure(status, e.to_string())
}
