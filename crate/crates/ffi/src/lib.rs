//! C interface to `qcontext`.
//!
//! Every fallible call returns a [`QcStatus`]; on failure the message is kept
//! in a per-thread slot readable through [`qc_last_error`]. Handles are
//! opaque and must be released with their matching `*_free` function.
//! Strings handed out by the library are released with [`qc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcontext::boolfn::{parse_poly, PredictedClass};
use qcontext::contextuality::{classify, dicke_certificate, Label};
use qcontext::empirical::io::{deserialize, serialize};
use qcontext::empirical::{build_model, parse_scenario, EmpiricalModel};
use qcontext::states::StateSpec;
use qcontext::witness::Preset;
use qcontext::qcore::StateVector;
use qcontext::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    InvalidArgument = 5,
    NotUnitary = 6,
    Validation = 7,
    SizeBound = 8,
    LpIndeterminate = 9,
    StrictnessFails = 10,
    UnknownFamily = 11,
    Panic = 12,
}

/// Position in the contextuality hierarchy, weakest first.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcLabel {
    NonContextual = 0,
    Weak = 1,
    Logical = 2,
    Strong = 3,
}

/// Class predicted from a polynomial's algebraic normal form.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcPredicted {
    NonContextual = 0,
    Weak = 1,
    AtLeastLogical = 2,
    Strong = 3,
}

/// A parsed state together with the family it came from.
pub struct QcState {
    spec: StateSpec,
    state: StateVector,
}

/// An empirical model: one probability row per measurement context.
pub struct QcModel {
    model: EmpiricalModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::Parse { .. } => QcStatus::Parse,
        Error::DimensionMismatch { .. } => QcStatus::DimensionMismatch,
        Error::InvalidArgument(_) => QcStatus::InvalidArgument,
        Error::NotUnitary { .. } => QcStatus::NotUnitary,
        Error::Validation { .. } => QcStatus::Validation,
        Error::SizeBound { .. } => QcStatus::SizeBound,
        Error::LpIndeterminate { .. } => QcStatus::LpIndeterminate,
        Error::StrictnessFails { .. } => QcStatus::StrictnessFails,
        Error::UnknownFamily(_) => QcStatus::UnknownFamily,
    }
}

struct Fail(QcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, recording any error or panic in the last-error slot.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> QcStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            QcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(QcStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(QcStatus::NullPointer, format!("{name} is null")))
}

fn out_arg<T>(p: *mut T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(QcStatus::NullPointer, format!("{name} is null")));
    }
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a state spec such as `dicke:3,2`, `ghz:3`, `bell:+` or `fd:q1q2`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_state_parse(spec: *const c_char, out: *mut *mut QcState) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let spec: StateSpec = str_arg(spec, "spec")?.parse()?;
        let state = spec.build()?;
        *out = Box::into_raw(Box::new(QcState { spec, state }));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from [`qc_state_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_state_free(state: *mut QcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_state_n_qubits(state: *const QcState) -> u32 {
    state.as_ref().map_or(0, |s| s.state.n_qubits() as u32)
}

/// Builds the empirical model of `state`. `observables` uses the CLI syntax
/// (`Y/Z`, or one `first/second` pair per party); null selects the family preset.
///
/// # Safety
/// `state` must be a live handle, `observables` null or nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_model_build(
    state: *const QcState,
    observables: *const c_char,
    out: *mut *mut QcModel,
) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let s = ref_arg(state, "state")?;
        let n = s.state.n_qubits();
        let scenario = if observables.is_null() {
            Preset::for_spec(&s.spec)?.scenario(n)?
        } else {
            parse_scenario(str_arg(observables, "observables")?, n)?
        };
        let model = build_model(&s.state, &scenario)?;
        *out = Box::into_raw(Box::new(QcModel { model }));
        Ok(())
    })
}

/// Reads a model from its JSON form.
///
/// # Safety
/// `json` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_model_from_json(json: *const c_char, out: *mut *mut QcModel) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let model = deserialize(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(QcModel { model }));
        Ok(())
    })
}

/// Writes the JSON form of `model` to `out`; free it with [`qc_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_model_to_json(model: *const QcModel, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let m = ref_arg(model, "model")?;
        *out = into_c_string(serialize(&m.model));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_model_free(model: *mut QcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Places `model` in the hierarchy. `consistent`, if non-null, receives the
/// number of global assignments consistent with the support.
///
/// # Safety
/// `model` must be a live handle; `label` writable; `consistent` null or writable.
#[no_mangle]
pub unsafe extern "C" fn qc_classify(model: *const QcModel, label: *mut QcLabel, consistent: *mut u64) -> QcStatus {
    guard(|| {
        out_arg(label, "label")?;
        let m = ref_arg(model, "model")?;
        let class = classify(&m.model)?;
        *label = match class.label {
            Label::NonContextual => QcLabel::NonContextual,
            Label::Weak => QcLabel::Weak,
            Label::Logical => QcLabel::Logical,
            Label::Strong => QcLabel::Strong,
        };
        if !consistent.is_null() {
            *consistent = class.consistent;
        }
        Ok(())
    })
}

/// Exact logical Bell violation of the Dicke state S(n,k) under X/Z, as a
/// reduced fraction `num/den` written to `out` (free with [`qc_string_free`]).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_dicke_violation(n: u32, k: u32, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let cert = dicke_certificate(n as usize, k as usize)?;
        *out = into_c_string(cert.violation.to_string());
        Ok(())
    })
}

/// Predicted class of the functionally dependent state of `poly` (ANF text,
/// e.g. `q1q2 + q3`).
///
/// # Safety
/// `poly` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qc_poly_predicted_class(poly: *const c_char, out: *mut QcPredicted) -> QcStatus {
    guard(|| {
        out_arg(out, "out")?;
        let p = parse_poly(str_arg(poly, "poly")?)?;
        *out = match p.predicted_class() {
            PredictedClass::NonContextual => QcPredicted::NonContextual,
            PredictedClass::Weak => QcPredicted::Weak,
            PredictedClass::AtLeastLogical => QcPredicted::AtLeastLogical,
            PredictedClass::Strong => QcPredicted::Strong,
        };
        Ok(())
    })
}
