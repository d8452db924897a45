//! C ABI for the multidev library.
//!
//! All structured payloads cross the boundary as JSON strings in the same
//! shapes the CLI uses; handles are opaque pointers with explicit free
//! functions. Every fallible call returns an `MdvStatus`: `Ok` and
//! `PropertyFalse` are successful computations (the latter meaning the
//! checked property does not hold), everything else is an error whose
//! message is retrievable with `mdv_last_error`.

use multidev::contexts::EventSpace;
use multidev::{json, pioneer, quantum, tbic};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MdvStatus {
    /// Computation succeeded and the checked property (if any) holds.
    Ok = 0,
    /// Computation succeeded but the checked property is false.
    PropertyFalse = 1,
    /// Domain or precondition error from the library.
    DomainError = 2,
    /// Null pointer, invalid UTF-8, or otherwise unusable argument.
    InvalidArgument = 3,
    /// Malformed JSON payload.
    ParseError = 4,
}

/// Opaque event-space handle.
pub struct MdvSpace {
    inner: EventSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn take_error() -> Option<CString> {
    LAST_ERROR.with(|e| e.borrow_mut().take())
}

/// Last error message of the current thread, or null if none. The caller
/// owns the returned string and must release it with `mdv_string_free`.
#[no_mangle]
pub extern "C" fn mdv_last_error() -> *mut c_char {
    match take_error() {
        Some(c) => c.into_raw(),
        None => std::ptr::null_mut(),
    }
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned by a `mdv_*` function and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, MdvStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(MdvStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        MdvStatus::InvalidArgument
    })
}

fn emit(out: *mut *mut c_char, text: String) -> Result<(), MdvStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(MdvStatus::InvalidArgument);
    }
    let c = CString::new(text).map_err(|_| {
        set_error("output contained an interior NUL");
        MdvStatus::InvalidArgument
    })?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn status(r: Result<MdvStatus, MdvStatus>) -> MdvStatus {
    match r {
        Ok(s) => s,
        Err(s) => s,
    }
}

/// The binary space 2_V for the given number of observers.
#[no_mangle]
pub extern "C" fn mdv_space_binary(observers: usize) -> *mut MdvSpace {
    if observers == 0 || observers > 32 {
        set_error("observer count out of range");
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(MdvSpace { inner: EventSpace::binary(observers) }))
}

/// Parses an event space from its JSON form. Null on error.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mdv_space_from_json(text: *const c_char) -> *mut MdvSpace {
    let Ok(s) = read_str(text) else { return std::ptr::null_mut() };
    let parsed: Result<json::EventSpaceJson, _> = serde_json::from_str(s);
    match parsed {
        Err(e) => {
            set_error(format!("malformed space JSON: {e}"));
            std::ptr::null_mut()
        }
        Ok(j) => match json::space_from_json(&j) {
            Err(e) => {
                set_error(e.to_string());
                std::ptr::null_mut()
            }
            Ok(space) => Box::into_raw(Box::new(MdvSpace { inner: space })),
        },
    }
}

/// Serializes a space handle back to JSON.
///
/// # Safety
/// `space` must be a live handle from `mdv_space_binary`/`mdv_space_from_json`.
#[no_mangle]
pub unsafe extern "C" fn mdv_space_to_json(
    space: *const MdvSpace,
    out_json: *mut *mut c_char,
) -> MdvStatus {
    status((|| {
        let Some(space) = space.as_ref() else {
            set_error("null space handle");
            return Err(MdvStatus::InvalidArgument);
        };
        let text = serde_json::to_string(&json::space_to_json(&space.inner)).unwrap();
        emit(out_json, text)?;
        Ok(MdvStatus::Ok)
    })())
}

/// Releases a space handle. Null is ignored.
///
/// # Safety
/// `space` must be a live handle or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdv_space_free(space: *mut MdvSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Total and top-level pioneer-set counts for one observer number.
///
/// # Safety
/// `total` and `top_level` must point to writable u64 storage.
#[no_mangle]
pub unsafe extern "C" fn mdv_pioneer_count(
    observers: usize,
    total: *mut u64,
    top_level: *mut u64,
) -> MdvStatus {
    if total.is_null() || top_level.is_null() {
        set_error("null output pointer");
        return MdvStatus::InvalidArgument;
    }
    match pioneer::count_pioneers(observers) {
        Err(e) => {
            set_error(e.to_string());
            MdvStatus::DomainError
        }
        Ok(c) => {
            unsafe {
                *total = c.total;
                *top_level = c.top_level;
            }
            MdvStatus::Ok
        }
    }
}

/// Inequality of a pioneer spec (JSON in, inequality JSON out).
///
/// # Safety
/// `spec_json` must be NUL-terminated; the output string must be freed with
/// `mdv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mdv_pioneer_inequality(
    spec_json: *const c_char,
    out_json: *mut *mut c_char,
) -> MdvStatus {
    status((|| {
        let s = read_str(spec_json)?;
        let j: json::PioneerSpecJson = serde_json::from_str(s).map_err(|e| {
            set_error(format!("malformed pioneer spec JSON: {e}"));
            MdvStatus::ParseError
        })?;
        let spec = json::pioneer_from_json(&j).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let ineq = pioneer::coefficients(&spec).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        emit(out_json, serde_json::to_string(&json::inequality_to_json(&ineq)).unwrap())?;
        Ok(MdvStatus::Ok)
    })())
}

/// Tightness check for a Γ given as gamma JSON. Returns `Ok` when tight,
/// `PropertyFalse` otherwise; the verdict JSON lands in `out_json` either
/// way.
///
/// # Safety
/// `space` must be a live handle, `gamma_json` NUL-terminated, and the
/// output freed with `mdv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mdv_tbic_check(
    space: *const MdvSpace,
    gamma_json: *const c_char,
    out_json: *mut *mut c_char,
) -> MdvStatus {
    status((|| {
        let Some(space) = space.as_ref() else {
            set_error("null space handle");
            return Err(MdvStatus::InvalidArgument);
        };
        let s = read_str(gamma_json)?;
        let j: json::GammaJson = serde_json::from_str(s).map_err(|e| {
            set_error(format!("malformed gamma JSON: {e}"));
            MdvStatus::ParseError
        })?;
        let gamma = json::gamma_from_json(&space.inner, &j).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let verdict = tbic::tbic_check(&space.inner, &gamma).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        emit(out_json, serde_json::to_string(&json::verdict_to_json(&verdict)).unwrap())?;
        Ok(if verdict.is_tight() { MdvStatus::Ok } else { MdvStatus::PropertyFalse })
    })())
}

/// Evaluates an inequality (JSON, space embedded) against a distribution
/// (JSON over the same space). Returns `Ok` when the value is nonnegative,
/// `PropertyFalse` when violated; the exact value string lands in
/// `out_value` as `"num/den"`.
///
/// # Safety
/// Strings must be NUL-terminated; the output is freed with
/// `mdv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mdv_ineq_eval(
    ineq_json: *const c_char,
    dist_json: *const c_char,
    out_value: *mut *mut c_char,
) -> MdvStatus {
    status((|| {
        let it = read_str(ineq_json)?;
        let dt = read_str(dist_json)?;
        let ij: json::BellInequalityJson = serde_json::from_str(it).map_err(|e| {
            set_error(format!("malformed inequality JSON: {e}"));
            MdvStatus::ParseError
        })?;
        let ineq = json::inequality_from_json(&ij, None).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let dj: json::DistributionJson = serde_json::from_str(dt).map_err(|e| {
            set_error(format!("malformed distribution JSON: {e}"));
            MdvStatus::ParseError
        })?;
        let d = json::distribution_from_json(ineq.space(), &dj).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let value = ineq.evaluate(&d).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let negative = value < num_traits_zero();
        emit(out_value, multidev::algebra::format_rational(&value))?;
        Ok(if negative { MdvStatus::PropertyFalse } else { MdvStatus::Ok })
    })())
}

fn num_traits_zero() -> multidev::algebra::Rational {
    <multidev::algebra::Rational as num_traits::Zero>::zero()
}

/// Every facet of the 2x2x2 Bell polytope as a JSON array of inequalities.
///
/// # Safety
/// The output string must be freed with `mdv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mdv_facets(out_json: *mut *mut c_char) -> MdvStatus {
    status((|| {
        let space = EventSpace::binary(2);
        let facets = tbic::brute_force_facets(&space).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let docs: Vec<json::BellInequalityJson> =
            facets.iter().map(json::inequality_to_json).collect();
        emit(out_json, serde_json::to_string(&docs).unwrap())?;
        Ok(MdvStatus::Ok)
    })())
}

/// Projects an omni-joint distribution (sizes/values JSON over the space's
/// observables) onto its multiple-context statistics.
///
/// # Safety
/// `space` must be a live handle, `dist_json` NUL-terminated, and the
/// output freed with `mdv_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mdv_project(
    space: *const MdvSpace,
    dist_json: *const c_char,
    out_json: *mut *mut c_char,
) -> MdvStatus {
    status((|| {
        let Some(space) = space.as_ref() else {
            set_error("null space handle");
            return Err(MdvStatus::InvalidArgument);
        };
        let s = read_str(dist_json)?;
        let dj: json::DistVectorJson = serde_json::from_str(s).map_err(|e| {
            set_error(format!("malformed distribution JSON: {e}"));
            MdvStatus::ParseError
        })?;
        let mu = json::dist_vector_from_json(&dj, true).map_err(|e| {
            set_error(e.to_string());
            MdvStatus::DomainError
        })?;
        let projected =
            multidev::contexts::project_omni(&space.inner, &mu).map_err(|e| {
                set_error(e.to_string());
                MdvStatus::DomainError
            })?;
        emit(
            out_json,
            serde_json::to_string(&json::distribution_to_json(&projected)).unwrap(),
        )?;
        Ok(MdvStatus::Ok)
    })())
}

/// Maximal quantum violation of the simplest even/odd inequality for one
/// observer count: the optimizing d (radians) and the minimal value.
///
/// # Safety
/// `d_out` and `value_out` must point to writable f64 storage.
#[no_mangle]
pub unsafe extern "C" fn mdv_max_violation(
    observers: usize,
    d_out: *mut f64,
    value_out: *mut f64,
) -> MdvStatus {
    if d_out.is_null() || value_out.is_null() {
        set_error("null output pointer");
        return MdvStatus::InvalidArgument;
    }
    match quantum::maximize_violation(observers) {
        Err(e) => {
            set_error(e.to_string());
            MdvStatus::DomainError
        }
        Ok((d, value)) => {
            unsafe {
                *d_out = d;
                *value_out = value;
            }
            MdvStatus::Ok
        }
    }
}
