//! C bindings for the `conley` crate.
//!
//! The API follows the usual opaque-handle pattern: a `ConleySystem` is
//! created from a run-configuration file, queried for JSON reports or SVG
//! figures, and freed by the caller. Every function returns a
//! `ConleyStatus`; on failure the handle (or, for constructor failures, a
//! thread-local slot) stores a human-readable message retrievable with
//! `conley_system_last_error` / `conley_last_error`.
//!
//! Memory rules: every `char *` produced by this library must be released
//! with `conley_string_free`; every handle with `conley_system_free`.
//! Passing a null pointer where a non-null one is required yields
//! `CONLEY_STATUS_NULL_POINTER` and touches nothing.

use conley::config::{parse_neighbourhood, NeighbourhoodSpec, RunConfig};
use conley::error::ConleyError;
use conley::figure::{render, FigureStyle, Overlays};
use conley::grid::GridSpec;
use conley::isolation::check_isolation;
use conley::report::{build_report, exit_code, ingest};
use conley::sampling::{MvMap, SampleSet};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::sync::Arc;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConleyStatus {
    /// The call succeeded.
    ConleyStatusOk = 0,
    /// Internal error or failed audit property.
    ConleyStatusInternal = 1,
    /// Configuration or input parsing error.
    ConleyStatusConfig = 2,
    /// The neighbourhood fails to isolate.
    ConleyStatusIsolation = 3,
    /// No admissible index pair exists at the current resolution.
    ConleyStatusPair = 4,
    /// The excision isomorphism could not be inverted.
    ConleyStatusExcision = 5,
    /// A required pointer argument was null.
    ConleyStatusNullPointer = 6,
    /// A string argument was not valid UTF-8.
    ConleyStatusUtf8 = 7,
}

use ConleyStatus::*;

fn status_of(e: &ConleyError) -> ConleyStatus {
    match exit_code(e) {
        2 => ConleyStatusConfig,
        3 => ConleyStatusIsolation,
        4 => ConleyStatusPair,
        5 => ConleyStatusExcision,
        _ => ConleyStatusInternal,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// An analysis session: parsed configuration, grid, samples and the
/// induced multivalued map. Opaque to C callers.
pub struct ConleySystem {
    config: RunConfig,
    grid: Arc<GridSpec>,
    samples: SampleSet,
    map: MvMap,
    last_error: Option<CString>,
}

impl ConleySystem {
    fn record(&mut self, e: &ConleyError) -> ConleyStatus {
        self.last_error = Some(
            CString::new(e.to_string().replace('\0', " ")).expect("nul bytes removed"),
        );
        status_of(e)
    }
}

fn write_string(out: *mut *mut c_char, s: String) -> ConleyStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ConleyStatusOk
        }
        Err(_) => ConleyStatusInternal,
    }
}

/// Build a system from a JSON run-configuration file.
///
/// On success writes a new handle to `out` and returns OK. On failure
/// returns the matching status; the message is available through
/// `conley_last_error` on the same thread.
///
/// # Safety
/// `config_path` must point to a nul-terminated string and `out` to a
/// writable pointer slot; both stay borrowed only for the duration of the
/// call.
#[no_mangle]
pub unsafe extern "C" fn conley_system_new_from_config(
    config_path: *const c_char,
    out: *mut *mut ConleySystem,
) -> ConleyStatus {
    if config_path.is_null() || out.is_null() {
        return ConleyStatusNullPointer;
    }
    let Ok(path) = CStr::from_ptr(config_path).to_str() else {
        return ConleyStatusUtf8;
    };
    let built = (|| {
        let config = RunConfig::load(Path::new(path))?;
        let (grid, samples, map) = ingest(&config)?;
        Ok::<_, ConleyError>(ConleySystem { config, grid, samples, map, last_error: None })
    })();
    match built {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(sys));
            ConleyStatusOk
        }
        Err(e) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Release a handle created by `conley_system_new_from_config`.
/// Passing null is a no-op.
///
/// # Safety
/// `sys` must be null or a pointer previously returned by the constructor
/// and not freed before.
#[no_mangle]
pub unsafe extern "C" fn conley_system_free(sys: *mut ConleySystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Release a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned by a `*_json`,
/// `*_svg` or error accessor of this library, and not freed before.
#[no_mangle]
pub unsafe extern "C" fn conley_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run the full analysis of every configured neighbourhood and write the
/// JSON report to `out_json` (caller frees with `conley_string_free`).
///
/// The report is produced even when individual neighbourhoods fail; the
/// returned status reflects the first per-neighbourhood error, OK when
/// every neighbourhood succeeded.
///
/// # Safety
/// `sys` must be a live handle; `out_json` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn conley_system_analyze_json(
    sys: *mut ConleySystem,
    out_json: *mut *mut c_char,
) -> ConleyStatus {
    if sys.is_null() || out_json.is_null() {
        return ConleyStatusNullPointer;
    }
    let sys = &mut *sys;
    let field = match sys.config.field(None) {
        Ok(f) => f,
        Err(e) => return sys.record(&e),
    };
    let report = build_report(&sys.config, &sys.grid, &sys.samples, &sys.map, field);
    let status = match report.first_error() {
        Some(err) => {
            sys.last_error =
                Some(CString::new(err.message.replace('\0', " ")).expect("nul bytes removed"));
            match err.exit {
                2 => ConleyStatusConfig,
                3 => ConleyStatusIsolation,
                4 => ConleyStatusPair,
                5 => ConleyStatusExcision,
                _ => ConleyStatusInternal,
            }
        }
        None => ConleyStatusOk,
    };
    let write = write_string(out_json, report.to_json());
    if write != ConleyStatusOk {
        return write;
    }
    status
}

/// Render the sampling figure as an SVG document in `out_svg` (caller
/// frees with `conley_string_free`). The first explicit neighbourhood of
/// the configuration, its invariant part and the image of that part are
/// overlaid when available.
///
/// # Safety
/// `sys` must be a live handle; `out_svg` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn conley_system_figure_svg(
    sys: *mut ConleySystem,
    out_svg: *mut *mut c_char,
) -> ConleyStatus {
    if sys.is_null() || out_svg.is_null() {
        return ConleyStatusNullPointer;
    }
    let sys = &mut *sys;
    let mut overlays = Overlays::default();
    for literal in sys.config.neighbourhoods.values() {
        let spec = match parse_neighbourhood(&sys.grid, literal) {
            Ok(s) => s,
            Err(e) => return sys.record(&e),
        };
        if let NeighbourhoodSpec::Explicit(n) = spec {
            if let Ok((_, parts)) = check_isolation(&sys.map, &n) {
                if let Ok(img) = conley::dynamics::image(&sys.map, &parts.inv) {
                    overlays.fs_set = Some(img);
                }
                overlays.s_set = Some(parts.inv);
            }
            overlays.n_set = Some(n);
            break;
        }
    }
    let style = match &sys.config.figure_colors {
        Some(over) => FigureStyle::with_overrides(over),
        None => FigureStyle::default(),
    };
    match render(&sys.map, &sys.samples, &overlays, &style) {
        Ok(svg) => write_string(out_svg, svg),
        Err(e) => sys.record(&e),
    }
}

/// Copy the message of the last failure recorded on this handle to `out`
/// (caller frees with `conley_string_free`). Writes null when no failure
/// has been recorded.
///
/// # Safety
/// `sys` must be a live handle; `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn conley_system_last_error(
    sys: *const ConleySystem,
    out: *mut *mut c_char,
) -> ConleyStatus {
    if sys.is_null() || out.is_null() {
        return ConleyStatusNullPointer;
    }
    match &(*sys).last_error {
        Some(c) => write_string(out, c.to_string_lossy().into_owned()),
        None => {
            *out = std::ptr::null_mut();
            ConleyStatusOk
        }
    }
}

/// Copy the message of the last constructor failure on this thread to
/// `out` (caller frees with `conley_string_free`). Writes null when no
/// failure has been recorded.
///
/// # Safety
/// `out` must be a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn conley_last_error(out: *mut *mut c_char) -> ConleyStatus {
    if out.is_null() {
        return ConleyStatusNullPointer;
    }
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => write_string(out, c.to_string_lossy().into_owned()),
        None => {
            *out = std::ptr::null_mut();
            ConleyStatusOk
        }
    })
}

/// A static description of a status code. Never null; do not free.
#[no_mangle]
pub extern "C" fn conley_status_message(status: ConleyStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        ConleyStatusOk => b"ok\0",
        ConleyStatusInternal => b"internal error or failed audit property\0",
        ConleyStatusConfig => b"configuration or input error\0",
        ConleyStatusIsolation => b"neighbourhood fails to isolate\0",
        ConleyStatusPair => b"no admissible index pair at this resolution\0",
        ConleyStatusExcision => b"excision isomorphism not invertible\0",
        ConleyStatusNullPointer => b"required pointer argument was null\0",
        ConleyStatusUtf8 => b"string argument was not valid UTF-8\0",
    };
    msg.as_ptr() as *const c_char
}
