//! C ABI over `cvtele`.
//!
//! Circuits cross the boundary as opaque `CvtCircuit` handles. Every fallible
//! call returns a `CvtStatus`; on anything but `CVT_STATUS_OK` a description
//! is available from `cvt_last_error()` on the same thread. Strings handed out
//! by the library must be released with `cvt_string_free`, circuits with
//! `cvt_circuit_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvtele::circuit::presets::{build_ao_classical, build_ao_quantum, build_eo_classical};
use cvtele::fock::{simulate, OracleOptions, DEFAULT_TAIL_THRESHOLD};
use cvtele::metrics::{teleport_report, ReportOptions};
use cvtele::mode::stats::{quadrature_stats, QuadratureStats};
use cvtele::{dsl, Circuit, CircuitError};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Circuit = 4,
    UnknownMode = 5,
    Oracle = 6,
    Panic = 7,
}

/// Opaque circuit handle.
pub struct CvtCircuit {
    inner: Circuit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CvtReport {
    pub signal_gain: f64,
    pub added_noise_plus: f64,
    pub added_noise_minus: f64,
    pub fidelity: f64,
    pub transfer_plus: f64,
    pub transfer_minus: f64,
    pub conditional_variance_plus: f64,
    pub conditional_variance_minus: f64,
    pub classical_channel_flag: bool,
    pub fidelity_flag: bool,
    pub transfer_flag: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CvtQuadratureStats {
    pub mean_plus: f64,
    pub mean_minus: f64,
    pub var_plus: f64,
    pub var_minus: f64,
    pub cov_plus_minus: f64,
    pub mean_photons: f64,
}

impl From<QuadratureStats> for CvtQuadratureStats {
    fn from(s: QuadratureStats) -> Self {
        Self {
            mean_plus: s.mean_plus,
            mean_minus: s.mean_minus,
            var_plus: s.var_plus,
            var_minus: s.var_minus,
            cov_plus_minus: s.cov_plus_minus,
            mean_photons: s.mean_photons,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CvtStatus, String);

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> CvtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CvtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CvtStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CvtStatus::NullPointer, format!("{what} is NULL"))
}

fn circuit_err(e: CircuitError) -> Failure {
    Failure(CvtStatus::Circuit, e.to_string())
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(CvtStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `c` must be NULL or a live handle from this library.
unsafe fn handle<'a>(c: *const CvtCircuit) -> Result<&'a CvtCircuit, Failure> {
    c.as_ref().ok_or_else(|| null("circuit"))
}

/// # Safety
/// `out` must be NULL or valid for a pointer write.
unsafe fn hand_out(out: *mut *mut CvtCircuit, circuit: Result<Circuit, Failure>) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = ptr::null_mut();
    let inner = circuit?;
    *out = Box::into_raw(Box::new(CvtCircuit { inner }));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cvt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cvt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `.qot` source into a new circuit.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_parse(source: *const c_char, out: *mut *mut CvtCircuit) -> CvtStatus {
    guard(|| {
        let src = read_str(source, "source")?;
        let circuit = dsl::parse(src).map_err(|e| Failure(CvtStatus::Parse, e.to_string()));
        hand_out(out, circuit)
    })
}

/// Electro-optic classical teleporter.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_eo_classical(k: f64, lambda: f64, out: *mut *mut CvtCircuit) -> CvtStatus {
    guard(|| hand_out(out, build_eo_classical(k, lambda).map_err(circuit_err)))
}

/// All-optical classical teleporter.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_ao_classical(gain: f64, out: *mut *mut CvtCircuit) -> CvtStatus {
    guard(|| hand_out(out, build_ao_classical(gain).map_err(circuit_err)))
}

/// All-optical quantum teleporter; `composite` selects the two-amplifier build.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_ao_quantum(
    gain: f64,
    h: f64,
    composite: bool,
    out: *mut *mut CvtCircuit,
) -> CvtStatus {
    guard(|| hand_out(out, build_ao_quantum(gain, h, composite).map_err(circuit_err)))
}

/// Releases a circuit. NULL is ignored.
///
/// # Safety
/// `circuit` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_free(circuit: *mut CvtCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Sets the coherent amplitude of the signal input.
///
/// # Safety
/// `circuit` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_set_alpha(circuit: *mut CvtCircuit, re: f64, im: f64) -> CvtStatus {
    guard(|| {
        let c = circuit.as_mut().ok_or_else(|| null("circuit"))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(Failure(CvtStatus::Circuit, "amplitude must be finite".into()));
        }
        c.inner = c.inner.clone().with_signal_displacement(Complex64::new(re, im));
        Ok(())
    })
}

/// Canonical `.qot` text; free the result with `cvt_string_free`.
///
/// # Safety
/// `circuit` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_format(circuit: *const CvtCircuit, out: *mut *mut c_char) -> CvtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = dsl::format(&handle(circuit)?.inner);
        *out = CString::new(text).expect("formatted text has no NULs").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cvt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Teleportation figures of merit. `channel` may be NULL; it names the mode
/// whose variances decide the classical-channel flag.
///
/// # Safety
/// `circuit` must be a live handle, `channel` NULL or a NUL-terminated
/// string, and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_report(
    circuit: *const CvtCircuit,
    channel: *const c_char,
    out: *mut CvtReport,
) -> CvtStatus {
    guard(|| {
        let c = handle(circuit)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut opts = ReportOptions::default();
        if !channel.is_null() {
            opts.channel = Some(read_str(channel, "channel")?.to_string());
        }
        let run = c.inner.run().map_err(circuit_err)?;
        if let Some(name) = &opts.channel {
            if run.mode(name).is_none() {
                return Err(Failure(CvtStatus::UnknownMode, format!("no mode named `{name}`")));
            }
        }
        let r = teleport_report(&run, &opts);
        *out = CvtReport {
            signal_gain: r.signal_gain,
            added_noise_plus: r.added_noise_plus,
            added_noise_minus: r.added_noise_minus,
            fidelity: r.fidelity,
            transfer_plus: r.transfer_plus,
            transfer_minus: r.transfer_minus,
            conditional_variance_plus: r.conditional_variance_plus,
            conditional_variance_minus: r.conditional_variance_minus,
            classical_channel_flag: r.classical_channel_flag,
            fidelity_flag: r.fidelity_flag,
            transfer_flag: r.transfer_flag,
        };
        Ok(())
    })
}

/// Quadrature moments of the named mode.
///
/// # Safety
/// `circuit` must be a live handle, `mode` a NUL-terminated string, `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_mode_stats(
    circuit: *const CvtCircuit,
    mode: *const c_char,
    out: *mut CvtQuadratureStats,
) -> CvtStatus {
    guard(|| {
        let c = handle(circuit)?;
        let name = read_str(mode, "mode")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let run = c.inner.run().map_err(circuit_err)?;
        let m = run
            .mode(name)
            .ok_or_else(|| Failure(CvtStatus::UnknownMode, format!("no mode named `{name}`")))?;
        *out = quadrature_stats(m).into();
        Ok(())
    })
}

/// Simulates the circuit in a number basis truncated at `cutoff` and reports
/// the output mode's moments and its fidelity with the input coherent state.
/// A `tail_threshold` of 0 selects the default.
///
/// # Safety
/// `circuit` must be a live handle; `stats` and `fidelity` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_circuit_oracle(
    circuit: *const CvtCircuit,
    cutoff: usize,
    tail_threshold: f64,
    stats: *mut CvtQuadratureStats,
    fidelity: *mut f64,
) -> CvtStatus {
    guard(|| {
        let c = handle(circuit)?;
        if stats.is_null() || fidelity.is_null() {
            return Err(null("out"));
        }
        let opts = OracleOptions {
            cutoff,
            tail_threshold: if tail_threshold > 0.0 { tail_threshold } else { DEFAULT_TAIL_THRESHOLD },
        };
        let oracle = |e: cvtele::fock::OracleError| Failure(CvtStatus::Oracle, e.to_string());
        let run = simulate(&c.inner, opts).map_err(oracle)?;
        let slot = run.slot(c.inner.output()).map_err(oracle)?;
        let s = run.state.measure(slot).map_err(oracle)?;
        let f = run.state.overlap(c.inner.signal_displacement(), slot).map_err(oracle)?;
        *stats = s.into();
        *fidelity = f;
        Ok(())
    })
}
