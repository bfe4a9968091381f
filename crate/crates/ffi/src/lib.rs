//! C ABI over `trustdyn`.
//!
//! Objects are opaque handles created by `*_new` functions and released by
//! the matching `*_free`. Every fallible call returns a [`TdStatus`]; on
//! failure a description is available from [`td_last_error_message`] on the
//! same thread. Outputs are written through caller-provided pointers only on
//! success.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trustdyn::basins::{basin_fraction, basin_integrator_default};
use trustdyn::dynamics::{integrate, replicator_rhs, IntegratorConfig, Trajectory};
use trustdyn::equilibria::{
    analyze_boundary, find_interior_fixed_points, thresholds, EquilibriumLabel, EquilibriumReport, Stability,
};
use trustdyn::payoffs::expected_payoffs;
use trustdyn::regimes::{classify_regime, CaseId};
use trustdyn::{GameParams, PopulationState, RawParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidState = 3,
    InvalidConfig = 4,
    IndexOutOfRange = 5,
    NumericalFailure = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdLabel {
    MU = 0,
    MT = 1,
    PU = 2,
    PT = 3,
    PTU = 4,
    PMU = 5,
    PMT = 6,
    Interior = 7,
}

impl From<EquilibriumLabel> for TdLabel {
    fn from(l: EquilibriumLabel) -> Self {
        match l {
            EquilibriumLabel::MU => TdLabel::MU,
            EquilibriumLabel::MT => TdLabel::MT,
            EquilibriumLabel::PU => TdLabel::PU,
            EquilibriumLabel::PT => TdLabel::PT,
            EquilibriumLabel::PTU => TdLabel::PTU,
            EquilibriumLabel::PMU => TdLabel::PMU,
            EquilibriumLabel::PMT => TdLabel::PMT,
            EquilibriumLabel::Interior => TdLabel::Interior,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdStability {
    Stable = 0,
    Unstable = 1,
    Marginal = 2,
}

impl From<Stability> for TdStability {
    fn from(s: Stability) -> Self {
        match s {
            Stability::Stable => TdStability::Stable,
            Stability::Unstable => TdStability::Unstable,
            Stability::Marginal => TdStability::Marginal,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdCase {
    Boundary = 0,
    Case1 = 1,
    Case2 = 2,
    Case3 = 3,
    Case4 = 4,
    Case5 = 5,
    Case6 = 6,
}

impl From<CaseId> for TdCase {
    fn from(c: CaseId) -> Self {
        match c {
            CaseId::Case1 => TdCase::Case1,
            CaseId::Case2 => TdCase::Case2,
            CaseId::Case3 => TdCase::Case3,
            CaseId::Case4 => TdCase::Case4,
            CaseId::Case5 => TdCase::Case5,
            CaseId::Case6 => TdCase::Case6,
            CaseId::Boundary => TdCase::Boundary,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdPayoffs {
    pub f_p: f64,
    pub f_m: f64,
    pub f_t: f64,
    pub f_u: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdVector {
    pub dx_i: f64,
    pub dx_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdThresholds {
    pub alpha_star: f64,
    pub lambda_low: f64,
    pub lambda_high: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdEquilibrium {
    pub label: TdLabel,
    pub x_i: f64,
    pub x_t: f64,
    pub eig_re: [f64; 2],
    pub eig_im: [f64; 2],
    pub stability: TdStability,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdIntegratorConfig {
    pub step: f64,
    pub t_max: f64,
    pub convergence_eps: f64,
    pub clamp_eps: f64,
    pub sample_every: u64,
}

impl From<IntegratorConfig> for TdIntegratorConfig {
    fn from(c: IntegratorConfig) -> Self {
        Self {
            step: c.step,
            t_max: c.t_max,
            convergence_eps: c.convergence_eps,
            clamp_eps: c.clamp_eps,
            sample_every: c.sample_every,
        }
    }
}

impl From<TdIntegratorConfig> for IntegratorConfig {
    fn from(c: TdIntegratorConfig) -> Self {
        Self {
            step: c.step,
            t_max: c.t_max,
            convergence_eps: c.convergence_eps,
            clamp_eps: c.clamp_eps,
            sample_every: c.sample_every,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdSample {
    pub t: f64,
    pub x_i: f64,
    pub x_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdBasinResult {
    pub fraction: f64,
    pub area: f64,
    pub attracted: u64,
    pub unresolved: u64,
    pub total: u64,
}

/// Opaque validated parameter set.
pub struct TdParams(GameParams);

/// Opaque list of fixed points with their stability analysis.
pub struct TdEquilibria(Vec<EquilibriumReport>);

/// Opaque integrated trajectory.
pub struct TdTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: impl ToString) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.to_string().into_bytes());
}

fn fail(status: TdStatus, msg: impl ToString) -> TdStatus {
    set_error(msg);
    status
}

/// Run `body`, converting panics into [`TdStatus::Panic`].
fn guard<F: FnOnce() -> TdStatus>(body: F) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(TdStatus::Panic, msg)
        }
    }
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => return fail(TdStatus::NullPointer, concat!(stringify!($ptr), " is null")),
        }
    };
}

macro_rules! out {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return fail(TdStatus::NullPointer, concat!(stringify!($ptr), " is null"));
        }
    };
}

fn state(params: &GameParams, x_i: f64, x_t: f64) -> Result<PopulationState, TdStatus> {
    PopulationState::new(x_i, x_t, params).map_err(|e| fail(TdStatus::InvalidState, e))
}

/// Copy the last error message of this thread into `buf` as a
/// NUL-terminated string, truncating to `len - 1` bytes. Returns the full
/// message length excluding the terminator. `buf` may be null to query the
/// length.
#[no_mangle]
pub unsafe extern "C" fn td_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn td_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Validate parameters and allocate a handle.
#[no_mangle]
pub unsafe extern "C" fn td_params_new(
    n: u32,
    alpha: f64,
    lambda: f64,
    r: f64,
    r_t: f64,
    t_v: f64,
    out: *mut *mut TdParams,
) -> TdStatus {
    guard(|| {
        out!(out);
        match GameParams::new(RawParams {
            n,
            alpha,
            lambda,
            r,
            r_t,
            t_v,
        }) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(TdParams(p)));
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::InvalidParams, e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_params_free(params: *mut TdParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

#[no_mangle]
pub unsafe extern "C" fn td_expected_payoffs(
    params: *const TdParams,
    x_i: f64,
    x_t: f64,
    out: *mut TdPayoffs,
) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        out!(out);
        let s = match state(p, x_i, x_t) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let e = expected_payoffs(&s, p);
        *out = TdPayoffs {
            f_p: e.f_p,
            f_m: e.f_m,
            f_t: e.f_t,
            f_u: e.f_u,
        };
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_replicator_rhs(
    params: *const TdParams,
    x_i: f64,
    x_t: f64,
    out: *mut TdVector,
) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        out!(out);
        let s = match state(p, x_i, x_t) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let v = replicator_rhs(&s, p);
        *out = TdVector {
            dx_i: v.dx_i,
            dx_t: v.dx_t,
        };
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_thresholds(params: *const TdParams, out: *mut TdThresholds) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        out!(out);
        let t = thresholds(p);
        *out = TdThresholds {
            alpha_star: t.alpha_star,
            lambda_low: t.lambda_low,
            lambda_high: t.lambda_high,
        };
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_classify_regime(params: *const TdParams, tol: f64, out: *mut TdCase) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        out!(out);
        if !(tol >= 0.0) {
            return fail(TdStatus::InvalidConfig, "tol must be non-negative");
        }
        *out = classify_regime(p, tol).case_id.into();
        TdStatus::Ok
    })
}

/// Boundary fixed points, followed by interior ones when
/// `include_interior` is true.
#[no_mangle]
pub unsafe extern "C" fn td_equilibria_new(
    params: *const TdParams,
    tol: f64,
    include_interior: bool,
    out: *mut *mut TdEquilibria,
) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        out!(out);
        if !(tol >= 0.0) {
            return fail(TdStatus::InvalidConfig, "tol must be non-negative");
        }
        let mut reports = analyze_boundary(p, tol);
        if include_interior {
            match find_interior_fixed_points(p, tol) {
                Ok(r) => reports.extend(r),
                Err(e) => return fail(TdStatus::NumericalFailure, e),
            }
        }
        *out = Box::into_raw(Box::new(TdEquilibria(reports)));
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_equilibria_len(table: *const TdEquilibria) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn td_equilibria_get(
    table: *const TdEquilibria,
    index: usize,
    out: *mut TdEquilibrium,
) -> TdStatus {
    guard(|| {
        let t = &deref!(table).0;
        out!(out);
        let Some(r) = t.get(index) else {
            return fail(TdStatus::IndexOutOfRange, format!("index {index} >= {}", t.len()));
        };
        *out = TdEquilibrium {
            label: r.label.into(),
            x_i: r.location.x_i,
            x_t: r.location.x_t,
            eig_re: [r.eigenvalues[0].re, r.eigenvalues[1].re],
            eig_im: [r.eigenvalues[0].im, r.eigenvalues[1].im],
            stability: r.stability.into(),
        };
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_equilibria_free(table: *mut TdEquilibria) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Defaults for single trajectories.
#[no_mangle]
pub extern "C" fn td_integrator_default() -> TdIntegratorConfig {
    IntegratorConfig::default().into()
}

/// Defaults for basin grids.
#[no_mangle]
pub extern "C" fn td_basin_integrator_default() -> TdIntegratorConfig {
    basin_integrator_default().into()
}

#[no_mangle]
pub unsafe extern "C" fn td_trajectory_new(
    params: *const TdParams,
    x_i: f64,
    x_t: f64,
    config: *const TdIntegratorConfig,
    out: *mut *mut TdTrajectory,
) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        let cfg: IntegratorConfig = (*deref!(config)).into();
        out!(out);
        if let Err(e) = cfg.validate() {
            return fail(TdStatus::InvalidConfig, e);
        }
        let s = match state(p, x_i, x_t) {
            Ok(s) => s,
            Err(e) => return e,
        };
        match integrate(&s, p, &cfg) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(TdTrajectory(t)));
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::NumericalFailure, e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_trajectory_len(traj: *const TdTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.samples.len())
}

#[no_mangle]
pub unsafe extern "C" fn td_trajectory_get(traj: *const TdTrajectory, index: usize, out: *mut TdSample) -> TdStatus {
    guard(|| {
        let t = &deref!(traj).0;
        out!(out);
        let Some(s) = t.samples.get(index) else {
            return fail(TdStatus::IndexOutOfRange, format!("index {index} >= {}", t.samples.len()));
        };
        *out = TdSample {
            t: s.t,
            x_i: s.state.x_i,
            x_t: s.state.x_t,
        };
        TdStatus::Ok
    })
}

/// Final sample and whether the vector field fell below the convergence
/// threshold before `t_max`.
#[no_mangle]
pub unsafe extern "C" fn td_trajectory_terminal(
    traj: *const TdTrajectory,
    out: *mut TdSample,
    converged: *mut bool,
) -> TdStatus {
    guard(|| {
        let t = &deref!(traj).0;
        out!(out);
        out!(converged);
        let last = t.samples.last().expect("trajectory holds its start");
        *out = TdSample {
            t: last.t,
            x_i: t.terminal.x_i,
            x_t: t.terminal.x_t,
        };
        *converged = t.converged;
        TdStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn td_trajectory_free(traj: *mut TdTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Share of a `grid x grid` set of starts attracted to P+T.
#[no_mangle]
pub unsafe extern "C" fn td_basin_fraction(
    params: *const TdParams,
    grid: u32,
    config: *const TdIntegratorConfig,
    out: *mut TdBasinResult,
) -> TdStatus {
    guard(|| {
        let p = &deref!(params).0;
        let cfg: IntegratorConfig = (*deref!(config)).into();
        out!(out);
        match basin_fraction(p, grid, &cfg) {
            Ok(r) => {
                *out = TdBasinResult {
                    fraction: r.fraction,
                    area: r.area,
                    attracted: r.attracted,
                    unresolved: r.unresolved,
                    total: r.total,
                };
                TdStatus::Ok
            }
            Err(e @ trustdyn::basins::BasinError::EmptyGrid) => fail(TdStatus::InvalidConfig, e),
            Err(e @ trustdyn::basins::BasinError::Integration(trustdyn::dynamics::IntegrationError::InvalidConfig(_))) => {
                fail(TdStatus::InvalidConfig, e)
            }
            Err(e) => fail(TdStatus::NumericalFailure, e),
        }
    })
}
