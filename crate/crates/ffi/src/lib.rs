//! C interface to the `ssarc` solver.
//!
//! Every handle is opaque and owned by the caller once returned; free it with
//! the matching `*_free` function. Fallible calls return an [`SsarcCode`] and
//! leave a message for [`ssarc_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::{DMatrix, DVector};
use ssarc::{find_builtin, solve, Problem, SolverConfig, SolverReport, SolverStatus, TestProblem};

/// Result of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsarcCode {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    SolverError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// How a solve ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsarcStatus {
    Converged = 0,
    LadderExhausted = 1,
    RankDeficient = 2,
    IterationCap = 3,
    EvaluationError = 4,
    Breakdown = 5,
}

impl From<SolverStatus> for SsarcStatus {
    fn from(s: SolverStatus) -> Self {
        match s {
            SolverStatus::Converged => Self::Converged,
            SolverStatus::LadderExhausted => Self::LadderExhausted,
            SolverStatus::RankDeficient => Self::RankDeficient,
            SolverStatus::IterationCap => Self::IterationCap,
            SolverStatus::EvaluationError => Self::EvaluationError,
            SolverStatus::Breakdown => Self::Breakdown,
        }
    }
}

/// User callbacks. Each returns 0 on success; any other value marks the
/// point as not evaluable. Matrices are written row-major.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct SsarcCallbacks {
    pub objective: Option<unsafe extern "C" fn(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int>,
    /// Writes `n` entries.
    pub gradient: Option<unsafe extern "C" fn(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int>,
    /// Writes `m` entries.
    pub constraints: Option<unsafe extern "C" fn(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int>,
    /// Writes the `m × n` Jacobian.
    pub jacobian: Option<unsafe extern "C" fn(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int>,
    /// Writes the `n × n` Hessian of `f - sᵀc`.
    pub lagrangian_hessian:
        Option<unsafe extern "C" fn(user: *mut c_void, x: *const f64, s: *const f64, out: *mut f64) -> c_int>,
}

type Callback = unsafe extern "C" fn(*mut c_void, *const f64, *mut f64) -> c_int;

struct CallbackProblem {
    name: String,
    n: usize,
    m: usize,
    x0: Vec<f64>,
    cb: SsarcCallbacks,
    user: *mut c_void,
}

// The caller promises the callbacks and user data may be used from the
// solving thread.
unsafe impl Send for CallbackProblem {}
unsafe impl Sync for CallbackProblem {}

impl CallbackProblem {
    fn fill(&self, f: Option<Callback>, x: &DVector<f64>, len: usize) -> Vec<f64> {
        let mut out = vec![f64::NAN; len];
        let ok = f.is_some_and(|f| unsafe { f(self.user, x.as_ptr(), out.as_mut_ptr()) } == 0);
        if !ok {
            out.fill(f64::NAN);
        }
        out
    }
}

impl Problem for CallbackProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    fn x0(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.x0)
    }

    fn objective(&self, x: &DVector<f64>) -> f64 {
        self.fill(self.cb.objective, x, 1)[0]
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.fill(self.cb.gradient, x, self.n))
    }

    fn constraints(&self, x: &DVector<f64>) -> DVector<f64> {
        if self.m == 0 {
            return DVector::zeros(0);
        }
        DVector::from_vec(self.fill(self.cb.constraints, x, self.m))
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        if self.m == 0 {
            return DMatrix::zeros(0, self.n);
        }
        DMatrix::from_row_slice(self.m, self.n, &self.fill(self.cb.jacobian, x, self.m * self.n))
    }

    fn lagrangian_hessian(&self, x: &DVector<f64>, s: &DVector<f64>) -> DMatrix<f64> {
        let mut out = vec![f64::NAN; self.n * self.n];
        let ok = self
            .cb
            .lagrangian_hessian
            .is_some_and(|f| unsafe { f(self.user, x.as_ptr(), s.as_ptr(), out.as_mut_ptr()) } == 0);
        if !ok {
            out.fill(f64::NAN);
        }
        DMatrix::from_row_slice(self.n, self.n, &out)
    }
}

enum Source {
    Builtin(TestProblem),
    Callbacks(CallbackProblem),
}

/// Opaque problem handle.
pub struct SsarcProblem {
    source: Source,
}

impl SsarcProblem {
    fn problem(&self) -> &dyn Problem {
        match &self.source {
            Source::Builtin(p) => p,
            Source::Callbacks(p) => p,
        }
    }
}

/// Opaque solver settings handle.
pub struct SsarcConfig {
    config: SolverConfig,
}

/// Opaque solve result handle.
pub struct SsarcReport {
    report: SolverReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(code: SsarcCode, msg: impl Into<String>) -> SsarcCode {
    set_error(msg);
    code
}

fn guard(f: impl FnOnce() -> SsarcCode) -> SsarcCode {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => {
            if code == SsarcCode::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            code
        }
        Err(_) => fail(SsarcCode::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, SsarcCode> {
    if s.is_null() {
        return Err(fail(SsarcCode::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(SsarcCode::InvalidArgument, format!("{what} is not UTF-8")))
}

macro_rules! out_ptr {
    ($p:expr, $what:literal) => {
        if $p.is_null() {
            return fail(SsarcCode::NullPointer, concat!($what, " is null"));
        }
    };
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ssarc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ssarc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default settings.
#[no_mangle]
pub extern "C" fn ssarc_config_new() -> *mut SsarcConfig {
    Box::into_raw(Box::new(SsarcConfig { config: SolverConfig::default() }))
}

/// # Safety
/// `config` must come from [`ssarc_config_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ssarc_config_free(config: *mut SsarcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Sets a numeric setting by field name, e.g. `"beta0"` or `"max_outer"`.
/// Boolean fields take 0 or 1.
///
/// # Safety
/// `config` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ssarc_config_set(config: *mut SsarcConfig, name: *const c_char, value: f64) -> SsarcCode {
    guard(|| {
        out_ptr!(config, "config");
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(code) => return code,
        };
        let cfg = &mut (*config).config;
        let mut json = serde_json::to_value(&*cfg).expect("config serializes");
        let Some(slot) = json.get_mut(name) else {
            return fail(SsarcCode::InvalidArgument, format!("unknown setting {name:?}"));
        };
        *slot = match slot {
            serde_json::Value::Bool(_) => serde_json::Value::Bool(value != 0.0),
            serde_json::Value::Number(n) if n.is_u64() => serde_json::json!(value as u64),
            _ if name == "max_inner" => serde_json::json!(value as u64),
            _ => serde_json::json!(value),
        };
        let updated: SolverConfig = match serde_json::from_value(json) {
            Ok(c) => c,
            Err(e) => return fail(SsarcCode::InvalidArgument, format!("{name}: {e}")),
        };
        if let Err(e) = updated.validate() {
            return fail(SsarcCode::InvalidArgument, e.to_string());
        }
        *cfg = updated;
        SsarcCode::Ok
    })
}

/// Reads a numeric setting by field name into `out`.
///
/// # Safety
/// `config` must be a live handle, `name` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssarc_config_get(config: *const SsarcConfig, name: *const c_char, out: *mut f64) -> SsarcCode {
    guard(|| {
        out_ptr!(config, "config");
        out_ptr!(out, "out");
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(code) => return code,
        };
        let json = serde_json::to_value(&(*config).config).expect("config serializes");
        match json.get(name) {
            Some(serde_json::Value::Bool(b)) => *out = f64::from(u8::from(*b)),
            Some(serde_json::Value::Number(n)) => *out = n.as_f64().unwrap_or(f64::NAN),
            Some(serde_json::Value::Null) => *out = f64::NAN,
            _ => return fail(SsarcCode::InvalidArgument, format!("unknown numeric setting {name:?}")),
        }
        SsarcCode::Ok
    })
}

/// Looks up a built-in problem by name (case-insensitive).
///
/// # Safety
/// `name` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssarc_problem_builtin(name: *const c_char, out: *mut *mut SsarcProblem) -> SsarcCode {
    guard(|| {
        out_ptr!(out, "out");
        *out = ptr::null_mut();
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(code) => return code,
        };
        let Some(p) = find_builtin(name) else {
            return fail(SsarcCode::UnknownProblem, format!("no built-in problem named {name:?}"));
        };
        *out = Box::into_raw(Box::new(SsarcProblem { source: Source::Builtin(p) }));
        SsarcCode::Ok
    })
}

/// Builds a problem from callbacks. `x0` holds `n` values and is copied.
/// `constraints` and `jacobian` may be null when `m == 0`.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `user` is passed through
/// untouched and must outlive the problem handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_problem_new(
    name: *const c_char,
    n: usize,
    m: usize,
    x0: *const f64,
    callbacks: *const SsarcCallbacks,
    user: *mut c_void,
    out: *mut *mut SsarcProblem,
) -> SsarcCode {
    guard(|| {
        out_ptr!(out, "out");
        *out = ptr::null_mut();
        out_ptr!(x0, "x0");
        out_ptr!(callbacks, "callbacks");
        let name = match read_str(name, "name") {
            Ok(s) => s.to_owned(),
            Err(code) => return code,
        };
        let cb = *callbacks;
        if n == 0 || m > n {
            return fail(SsarcCode::InvalidArgument, format!("need 0 <= m <= n and n > 0, got n = {n}, m = {m}"));
        }
        let required = cb.objective.is_some()
            && cb.gradient.is_some()
            && cb.lagrangian_hessian.is_some()
            && (m == 0 || (cb.constraints.is_some() && cb.jacobian.is_some()));
        if !required {
            return fail(SsarcCode::NullPointer, "a required callback is null");
        }
        let x0 = std::slice::from_raw_parts(x0, n).to_vec();
        let p = CallbackProblem { name, n, m, x0, cb, user };
        *out = Box::into_raw(Box::new(SsarcProblem { source: Source::Callbacks(p) }));
        SsarcCode::Ok
    })
}

/// # Safety
/// `problem` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ssarc_problem_free(problem: *mut SsarcProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_problem_n(problem: *const SsarcProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem().n())
}

/// Number of constraints, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_problem_m(problem: *const SsarcProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem().m())
}

/// Solves `problem`. A null `config` means defaults. A run that stops
/// without converging still returns [`SsarcCode::Ok`]; inspect the report's
/// status.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssarc_solve(
    problem: *const SsarcProblem,
    config: *const SsarcConfig,
    out: *mut *mut SsarcReport,
) -> SsarcCode {
    guard(|| {
        out_ptr!(out, "out");
        *out = ptr::null_mut();
        out_ptr!(problem, "problem");
        let default = SolverConfig::default();
        let cfg = config.as_ref().map_or(&default, |c| &c.config);
        match solve((*problem).problem(), cfg) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(SsarcReport { report }));
                SsarcCode::Ok
            }
            Err(e) => fail(SsarcCode::SolverError, e.to_string()),
        }
    })
}

/// # Safety
/// `report` must come from [`ssarc_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_free(report: *mut SsarcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_status(report: *const SsarcReport) -> SsarcStatus {
    (*report).report.status.into()
}

/// Accepted steps.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_nit(report: *const SsarcReport) -> usize {
    (*report).report.nit
}

/// Function evaluations.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_nif(report: *const SsarcReport) -> usize {
    (*report).report.nif
}

/// Gradient evaluations.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_nig(report: *const SsarcReport) -> usize {
    (*report).report.nig
}

/// Final `max(‖Zᵀg‖, ‖c‖)`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_res(report: *const SsarcReport) -> f64 {
    (*report).report.res
}

/// Copies the final point into `buf`, which must hold at least `len` values.
///
/// # Safety
/// `report` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ssarc_report_x(report: *const SsarcReport, buf: *mut f64, len: usize) -> SsarcCode {
    guard(|| {
        out_ptr!(report, "report");
        out_ptr!(buf, "buf");
        let x = &(*report).report.x;
        if len < x.len() {
            return fail(SsarcCode::BufferTooSmall, format!("need {} values, got {len}", x.len()));
        }
        std::slice::from_raw_parts_mut(buf, x.len()).copy_from_slice(x.as_slice());
        SsarcCode::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_match_core() {
        for s in [
            SolverStatus::Converged,
            SolverStatus::LadderExhausted,
            SolverStatus::RankDeficient,
            SolverStatus::IterationCap,
            SolverStatus::EvaluationError,
            SolverStatus::Breakdown,
        ] {
            let c: SsarcStatus = s.into();
            assert_eq!(format!("{c:?}"), format!("{s:?}"));
        }
    }

    #[test]
    fn error_message_is_cleared_by_success() {
        unsafe {
            let mut p = ptr::null_mut();
            assert_eq!(ssarc_problem_builtin(c"NOPE".as_ptr(), &mut p), SsarcCode::UnknownProblem);
            assert!(!ssarc_last_error().is_null());
            assert_eq!(ssarc_problem_builtin(c"hs6".as_ptr(), &mut p), SsarcCode::Ok);
            assert!(ssarc_last_error().is_null());
            ssarc_problem_free(p);
        }
    }
}
