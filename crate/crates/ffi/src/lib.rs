//! C ABI over the `critpath` library.
//!
//! Networks and results are opaque handles created by `cp_*` constructors
//! and released with the matching `*_free`. Every fallible call returns a
//! [`CpStatus`]; on failure `cp_last_error_message` describes the problem
//! for the calling thread. Strings handed out by the library must be
//! released with `cp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use critpath::exact::critical_path_exact;
use critpath::format::parse_project;
use critpath::ga::{evolve, extract_result, GaConfig};
use critpath::network::{build_network, expected_duration, ProjectNetwork};
use critpath::report::{emit_dot, emit_table};
use critpath::{Duration, ScheduleResult};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    InvalidArgument = 5,
    InvalidConfig = 6,
    RenderError = 7,
    Panic = 8,
}

/// A validated project network.
pub struct CpNetwork {
    raw: ProjectNetwork,
    normalized: ProjectNetwork,
}

/// The outcome of one solver run.
pub struct CpResult {
    inner: ScheduleResult,
}

/// Genetic algorithm parameters; see `cp_ga_config_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpGaConfig {
    pub population_size: usize,
    pub elitism_rate: f64,
    pub generations: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl From<CpGaConfig> for GaConfig {
    fn from(c: CpGaConfig) -> Self {
        GaConfig {
            population_size: c.population_size,
            elitism_rate: c.elitism_rate,
            generations: c.generations,
            iterations: c.iterations,
            seed: c.seed,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: CpStatus, message: impl Into<String>) -> CpStatus {
    set_error(message);
    status
}

/// Run `body`, turning panics into `CP_STATUS_PANIC`.
fn guard(body: impl FnOnce() -> Result<(), CpStatus>) -> CpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(CpStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, CpStatus> {
    p.as_ref()
        .ok_or_else(|| fail(CpStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CpStatus> {
    p.as_mut()
        .ok_or_else(|| fail(CpStatus::NullArgument, format!("{what} is null")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

fn estimate_value(x: f64, what: &str) -> Result<Duration, CpStatus> {
    if !x.is_finite() {
        return Err(fail(
            CpStatus::InvalidArgument,
            format!("{what} is not finite"),
        ));
    }
    format!("{x:.9}").parse().map_err(|_| {
        fail(
            CpStatus::InvalidArgument,
            format!("{what} = {x} is out of range"),
        )
    })
}

/// Parse a project document (`critpath v1 <cpm|pert>` format) and validate
/// it. On success `*out` owns a new network.
///
/// # Safety
/// `text` must be null or a valid NUL-terminated string; `out` must be null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_network_parse(
    text: *const c_char,
    out: *mut *mut CpNetwork,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        if text.is_null() {
            return Err(fail(CpStatus::NullArgument, "text is null"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| fail(CpStatus::InvalidUtf8, e.to_string()))?;
        let doc = parse_project(text).map_err(|e| fail(CpStatus::ParseError, e.to_string()))?;
        let raw = build_network(&doc.activities)
            .map_err(|r| fail(CpStatus::ValidationError, r.to_string()))?;
        let normalized = raw.normalize_terminals();
        *out = Box::into_raw(Box::new(CpNetwork { raw, normalized }));
        Ok(())
    })
}

/// Release a network. Null is ignored.
///
/// # Safety
/// `network` must be null or a pointer from `cp_network_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_network_free(network: *mut CpNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Number of events in the network as written, without virtual terminals.
/// Returns 0 for null.
///
/// # Safety
/// `network` must be null or a live network handle.
#[no_mangle]
pub unsafe extern "C" fn cp_network_node_count(network: *const CpNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.raw.node_count())
}

/// Number of activities in the network. Returns 0 for null.
///
/// # Safety
/// `network` must be null or a live network handle.
#[no_mangle]
pub unsafe extern "C" fn cp_network_activity_count(network: *const CpNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.raw.activities().len())
}

/// PERT expected time `(a + 4m + b) / 6`. Inputs are rounded to nine
/// decimals and must satisfy `0 <= a <= m <= b`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_expected_duration(a: f64, m: f64, b: f64, out: *mut f64) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let t = expected_duration(
            estimate_value(a, "a")?,
            estimate_value(m, "m")?,
            estimate_value(b, "b")?,
        )
        .map_err(|e| fail(CpStatus::InvalidArgument, e.to_string()))?;
        *out = t.to_f64();
        Ok(())
    })
}

/// Solve with the exact forward/backward pass engine.
///
/// # Safety
/// `network` must be null or a live network handle; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cp_solve_exact(
    network: *const CpNetwork,
    out: *mut *mut CpResult,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let net = borrow(network, "network")?;
        let inner = critical_path_exact(&net.normalized);
        *out = Box::into_raw(Box::new(CpResult { inner }));
        Ok(())
    })
}

/// Default GA parameters: population 32, elitism 0.25, 20 generations,
/// 2 restarts, seed 0.
#[no_mangle]
pub extern "C" fn cp_ga_config_default() -> CpGaConfig {
    let d = GaConfig::default();
    CpGaConfig {
        population_size: d.population_size,
        elitism_rate: d.elitism_rate,
        generations: d.generations,
        iterations: d.iterations,
        seed: d.seed,
    }
}

/// Solve with the genetic algorithm. A null `config` uses the defaults.
///
/// # Safety
/// `network` must be null or a live network handle; `config` must be null
/// or readable; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cp_solve_ga(
    network: *const CpNetwork,
    config: *const CpGaConfig,
    out: *mut *mut CpResult,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let net = borrow(network, "network")?;
        let config: GaConfig = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| cp_ga_config_default())
            .into();
        let ga = evolve(&net.normalized, &config)
            .map_err(|e| fail(CpStatus::InvalidConfig, e.to_string()))?;
        let inner = extract_result(&net.normalized, &ga);
        *out = Box::into_raw(Box::new(CpResult { inner }));
        Ok(())
    })
}

/// Release a result. Null is ignored.
///
/// # Safety
/// `result` must be null or a pointer from a `cp_solve_*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_result_free(result: *mut CpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Project duration of a result.
///
/// # Safety
/// `result` must be null or a live result handle; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cp_result_duration(result: *const CpResult, out: *mut f64) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = borrow(result, "result")?.inner.project_duration.to_f64();
        Ok(())
    })
}

/// Critical path events joined by `-`, virtual terminals omitted.
///
/// # Safety
/// `result` must be null or a live result handle; `out` must be null or
/// writable. Free `*out` with `cp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cp_result_path(
    result: *const CpResult,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        *out = to_c_string(borrow(result, "result")?.inner.milestones.join("-"));
        Ok(())
    })
}

/// Critical activity names joined by `-`.
///
/// # Safety
/// Same contract as `cp_result_path`.
#[no_mangle]
pub unsafe extern "C" fn cp_result_activities(
    result: *const CpResult,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        *out = to_c_string(
            borrow(result, "result")?
                .inner
                .critical_activities
                .join("-"),
        );
        Ok(())
    })
}

/// The result as a JSON object.
///
/// # Safety
/// Same contract as `cp_result_path`.
#[no_mangle]
pub unsafe extern "C" fn cp_result_to_json(
    result: *const CpResult,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let json = serde_json::to_string_pretty(&borrow(result, "result")?.inner)
            .map_err(|e| fail(CpStatus::RenderError, e.to_string()))?;
        *out = to_c_string(json);
        Ok(())
    })
}

/// Activity table for `result`, computed on `network`.
///
/// # Safety
/// `network` and `result` must be null or live handles; `out` must be null
/// or writable. Free `*out` with `cp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cp_emit_table(
    network: *const CpNetwork,
    result: *const CpResult,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let net = borrow(network, "network")?;
        let res = borrow(result, "result")?;
        *out = to_c_string(emit_table(&net.normalized, &res.inner));
        Ok(())
    })
}

/// Graphviz DOT for `result`, computed on `network`. Fails with
/// `CP_STATUS_RENDER_ERROR` when the result belongs to a different network.
///
/// # Safety
/// Same contract as `cp_emit_table`.
#[no_mangle]
pub unsafe extern "C" fn cp_emit_dot(
    network: *const CpNetwork,
    result: *const CpResult,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        *out = ptr::null_mut();
        let net = borrow(network, "network")?;
        let res = borrow(result, "result")?;
        let dot = emit_dot(&net.normalized, &res.inner)
            .map_err(|e| fail(CpStatus::RenderError, e.to_string()))?;
        *out = to_c_string(dot);
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `cp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
