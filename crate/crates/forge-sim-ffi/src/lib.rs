//! C ABI over the simulator: opaque handles, status codes, and a
//! per-thread last-error message. The header `include/forge_sim.h` is
//! generated from this file at build time.
//!
//! Ownership rules are the usual ones: anything returned by a `_new` or
//! `_run` call belongs to the caller and must go back through the matching
//! `_free`. Strings passed in are borrowed NUL-terminated UTF-8; nothing
//! holds onto them after the call returns.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use forge_sim::analytics::dev_project_histogram;
use forge_sim::config::{load_config, set_key, ConfigError};
use forge_sim::engine::{EngineError, SimConfig, SimState, Simulation};
use forge_sim::event::EventRecord;
use forge_sim::output::{simulate_to_dir, write_run_outputs, OutputError};

/// Result of every fallible call. Anything but `Ok` leaves a message
/// retrievable through `forge_sim_last_error` on the same thread.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForgeSimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidConfig = 3,
    IoError = 4,
    SimulationFailed = 5,
    BufferTooSmall = 6,
}

/// Opaque simulation configuration handle.
pub struct ForgeSimConfig {
    inner: SimConfig,
}

/// Opaque handle to a completed run: final state plus the full event log.
pub struct ForgeSimRun {
    config: SimConfig,
    state: SimState,
    events: Vec<EventRecord>,
    histogram: Vec<(u32, u64)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn fail(status: ForgeSimStatus, message: impl Into<String>) -> ForgeSimStatus {
    let message = message.into().replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(message).expect("NULs were stripped"));
    });
    status
}

fn config_status(err: &ConfigError) -> ForgeSimStatus {
    match err {
        ConfigError::Io { .. } => ForgeSimStatus::IoError,
        _ => ForgeSimStatus::InvalidConfig,
    }
}

fn engine_status(err: &EngineError) -> ForgeSimStatus {
    match err {
        EngineError::InvalidConfig(_) | EngineError::Behavior(_) | EngineError::Growth(_) => {
            ForgeSimStatus::InvalidConfig
        }
        EngineError::Sink(_) => ForgeSimStatus::IoError,
        _ => ForgeSimStatus::SimulationFailed,
    }
}

fn output_status(err: &OutputError) -> ForgeSimStatus {
    match err {
        OutputError::Io { .. } => ForgeSimStatus::IoError,
        OutputError::Engine(e) => engine_status(e),
    }
}

unsafe fn cstr_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, ForgeSimStatus> {
    if ptr.is_null() {
        return Err(fail(
            ForgeSimStatus::NullPointer,
            format!("{name} is a null pointer"),
        ));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        fail(
            ForgeSimStatus::InvalidUtf8,
            format!("{name} is not valid UTF-8"),
        )
    })
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn forge_sim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a configuration holding the default full-scale setup.
#[no_mangle]
pub extern "C" fn forge_sim_config_new() -> *mut ForgeSimConfig {
    Box::into_raw(Box::new(ForgeSimConfig {
        inner: SimConfig::default(),
    }))
}

/// Frees a configuration. A null pointer is a no-op.
///
/// # Safety
/// `config` must have come from `forge_sim_config_new` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_config_free(config: *mut ForgeSimConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Sets one configuration key (same keys as the config file format).
///
/// # Safety
/// `config` must be a live handle; `key` and `value` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_config_set(
    config: *mut ForgeSimConfig,
    key: *const c_char,
    value: *const c_char,
) -> ForgeSimStatus {
    clear_error();
    if config.is_null() {
        return fail(ForgeSimStatus::NullPointer, "config is a null pointer");
    }
    let key = match cstr_arg(key, "key") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let value = match cstr_arg(value, "value") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match set_key(&mut (*config).inner, key, value) {
        Ok(()) => ForgeSimStatus::Ok,
        Err(e) => fail(config_status(&e), e.to_string()),
    }
}

/// Replaces the configuration with one loaded from a config file.
///
/// # Safety
/// `config` must be a live handle; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_config_load(
    config: *mut ForgeSimConfig,
    path: *const c_char,
) -> ForgeSimStatus {
    clear_error();
    if config.is_null() {
        return fail(ForgeSimStatus::NullPointer, "config is a null pointer");
    }
    let path = match cstr_arg(path, "path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match load_config(Path::new(path)) {
        Ok(parsed) => {
            (*config).inner = parsed;
            ForgeSimStatus::Ok
        }
        Err(e) => fail(config_status(&e), e.to_string()),
    }
}

/// Runs the configured simulation, keeping the whole event log in memory,
/// and hands back a run handle through `out_run`. Intended for small and
/// medium runs; full-scale logs are better streamed with
/// `forge_sim_simulate_to_dir`.
///
/// # Safety
/// `config` must be a live handle and `out_run` a valid location to store
/// the new pointer.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run(
    config: *const ForgeSimConfig,
    out_run: *mut *mut ForgeSimRun,
) -> ForgeSimStatus {
    clear_error();
    if config.is_null() || out_run.is_null() {
        return fail(ForgeSimStatus::NullPointer, "config or out_run is null");
    }
    let sim_config = (*config).inner.clone();
    let run_config = sim_config.clone();
    let outcome = catch_unwind(AssertUnwindSafe(move || Simulation::run_collect(sim_config)));
    match outcome {
        Ok(Ok((state, events))) => {
            let histogram = dev_project_histogram(&state).iter().collect();
            *out_run = Box::into_raw(Box::new(ForgeSimRun {
                config: run_config,
                state,
                events,
                histogram,
            }));
            ForgeSimStatus::Ok
        }
        Ok(Err(e)) => fail(engine_status(&e), e.to_string()),
        Err(_) => fail(
            ForgeSimStatus::SimulationFailed,
            "simulation panicked; state discarded",
        ),
    }
}

/// Runs the configured simulation and streams all artifacts into `dir`
/// without materializing the log.
///
/// # Safety
/// `config` must be a live handle; `dir` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_simulate_to_dir(
    config: *const ForgeSimConfig,
    dir: *const c_char,
) -> ForgeSimStatus {
    clear_error();
    if config.is_null() {
        return fail(ForgeSimStatus::NullPointer, "config is a null pointer");
    }
    let dir = match cstr_arg(dir, "dir") {
        Ok(s) => s.to_string(),
        Err(status) => return status,
    };
    let sim_config = (*config).inner.clone();
    let outcome = catch_unwind(AssertUnwindSafe(move || {
        simulate_to_dir(&sim_config, Path::new(&dir), None)
    }));
    match outcome {
        Ok(Ok(_)) => ForgeSimStatus::Ok,
        Ok(Err(e)) => fail(output_status(&e), e.to_string()),
        Err(_) => fail(
            ForgeSimStatus::SimulationFailed,
            "simulation panicked; partial output may remain",
        ),
    }
}

/// Frees a run handle. A null pointer is a no-op.
///
/// # Safety
/// `run` must have come from `forge_sim_run` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_free(run: *mut ForgeSimRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of logged events, or 0 for a null handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_event_count(run: *const ForgeSimRun) -> u64 {
    if run.is_null() {
        return 0;
    }
    (*run).events.len() as u64
}

/// Number of projects ever created, or 0 for a null handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_project_count(run: *const ForgeSimRun) -> u64 {
    if run.is_null() {
        return 0;
    }
    (*run).state.projects.len() as u64
}

/// Number of bins in the final developers-per-project histogram; the
/// capacity needed by `forge_sim_run_histogram`.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_histogram_len(run: *const ForgeSimRun) -> usize {
    if run.is_null() {
        return 0;
    }
    (*run).histogram.len()
}

/// Copies the final histogram into caller buffers, bins in ascending
/// developer count: `developers[i]` paired with `projects[i]`.
///
/// # Safety
/// `run` must be a live handle; both buffers must hold at least `capacity`
/// elements.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_histogram(
    run: *const ForgeSimRun,
    developers: *mut u32,
    projects: *mut u64,
    capacity: usize,
) -> ForgeSimStatus {
    clear_error();
    if run.is_null() || developers.is_null() || projects.is_null() {
        return fail(ForgeSimStatus::NullPointer, "run or a buffer is null");
    }
    let bins = &(*run).histogram;
    if capacity < bins.len() {
        return fail(
            ForgeSimStatus::BufferTooSmall,
            format!("histogram needs capacity {}, got {capacity}", bins.len()),
        );
    }
    for (i, &(d, c)) in bins.iter().enumerate() {
        *developers.add(i) = d;
        *projects.add(i) = c;
    }
    ForgeSimStatus::Ok
}

/// Writes the run's artifacts (event log, project table, histogram,
/// manifest) into `dir`.
///
/// # Safety
/// `run` must be a live handle; `dir` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_run_write_outputs(
    run: *const ForgeSimRun,
    dir: *const c_char,
) -> ForgeSimStatus {
    clear_error();
    if run.is_null() {
        return fail(ForgeSimStatus::NullPointer, "run is a null pointer");
    }
    let dir = match cstr_arg(dir, "dir") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let run = &*run;
    match write_run_outputs(&run.config, &run.state, &run.events, Path::new(dir)) {
        Ok(()) => ForgeSimStatus::Ok,
        Err(e) => fail(output_status(&e), e.to_string()),
    }
}

/// Length in bytes, including the NUL terminator, of the last error message
/// on this thread; 0 when there is none.
#[no_mangle]
pub extern "C" fn forge_sim_last_error_length() -> usize {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|msg| msg.as_bytes_with_nul().len())
            .unwrap_or(0)
    })
}

/// Copies the last error message on this thread into `buf` as a
/// NUL-terminated string. With no pending error an empty string is written.
///
/// # Safety
/// `buf` must hold at least `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn forge_sim_last_error(
    buf: *mut c_char,
    capacity: usize,
) -> ForgeSimStatus {
    if buf.is_null() {
        return ForgeSimStatus::NullPointer;
    }
    LAST_ERROR.with(|slot| {
        let borrowed = slot.borrow();
        let bytes = borrowed
            .as_ref()
            .map(|msg| msg.as_bytes_with_nul())
            .unwrap_or(b"\0");
        if capacity < bytes.len() {
            return ForgeSimStatus::BufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        ForgeSimStatus::Ok
    })
}
