//! C ABI for the spectrahedra toolkit.
//!
//! Pencils are opaque handles created from JSON (string or file) and freed
//! with `spectra_pencil_free`. Every function returns a `SpectraStatus`;
//! on any non-`Ok` status, `spectra_last_error` returns a thread-local
//! message describing the failure. Strings returned through out-parameters
//! are allocated by this library and must be released with
//! `spectra_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use spectrahedra::certify::{self, CertifyConfig};
use spectrahedra::error::Error;
use spectrahedra::faces;
use spectrahedra::pencil::{parse_pencil_file, ParsedPencil, PencilFile, SymmetricPencil};
use spectrahedra::sections::{build_gamma, SectionConfig};
use spectrahedra::strata;
use spectrahedra::Tolerances;

/// Opaque pencil handle.
pub struct SpectraPencil {
    inner: SymmetricPencil,
}

/// Status codes returned by every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectraStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// The requested verification ran but did not verify.
    Unverified = 4,
    /// A proved statement failed numerically; indicates a solver bug.
    InternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_for(e: &Error) -> SpectraStatus {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::MalformedHermitian { .. } => {
            SpectraStatus::ParseError
        }
        Error::DimensionMismatch { .. }
        | Error::InvalidTolerance { .. }
        | Error::AsymmetryTooLarge { .. } => SpectraStatus::InvalidArgument,
        Error::BoundViolation { .. }
        | Error::HadamardCriterionViolated { .. }
        | Error::EqualityBoundExceeded { .. }
        | Error::ResidualTooLarge { .. }
        | Error::AuditMismatch { .. } => SpectraStatus::InternalError,
        _ => SpectraStatus::Unverified,
    }
}

fn fail(e: &Error) -> SpectraStatus {
    set_error(&e.to_string());
    status_for(e)
}

/// Last error message for this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn spectra_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, SpectraStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(SpectraStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        SpectraStatus::InvalidArgument
    })
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Result<&'a [f64], SpectraStatus> {
    if ptr.is_null() {
        set_error("null point argument");
        return Err(SpectraStatus::NullArgument);
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn tol_arg(tol_abs: f64) -> Result<Tolerances, SpectraStatus> {
    Tolerances::new(tol_abs).map_err(|e| fail(&e))
}

fn store_pencil(parsed: ParsedPencil, out: *mut *mut SpectraPencil) -> SpectraStatus {
    let inner = match parsed {
        ParsedPencil::Symmetric(p) => p,
        ParsedPencil::Hermitian { doubled, .. } => doubled,
    };
    let handle = Box::new(SpectraPencil { inner });
    unsafe { *out = Box::into_raw(handle) };
    SpectraStatus::Ok
}

/// Parse a pencil from a JSON string. Hermitian pencils are doubled to real
/// symmetric form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spectra_pencil_from_json(
    json: *const c_char,
    out: *mut *mut SpectraPencil,
) -> SpectraStatus {
    if out.is_null() {
        set_error("null out argument");
        return SpectraStatus::NullArgument;
    }
    let text = match cstr_arg(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match PencilFile::parse_str(text) {
        Ok(parsed) => store_pencil(parsed, out),
        Err(e) => fail(&e),
    }
}

/// Parse a pencil from a JSON file on disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spectra_pencil_load(
    path: *const c_char,
    out: *mut *mut SpectraPencil,
) -> SpectraStatus {
    if out.is_null() {
        set_error("null out argument");
        return SpectraStatus::NullArgument;
    }
    let path = match cstr_arg(path) {
        Ok(t) => PathBuf::from(t),
        Err(s) => return s,
    };
    match parse_pencil_file(&path) {
        Ok(parsed) => store_pencil(parsed, out),
        Err(e) => fail(&e),
    }
}

/// Release a pencil handle. Passing NULL is a no-op.
///
/// # Safety
/// `p` must be a pointer previously returned by a constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spectra_pencil_free(p: *mut SpectraPencil) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Matrix size `m` and ambient dimension `k` of the pencil.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn spectra_pencil_dims(
    p: *const SpectraPencil,
    m_out: *mut usize,
    k_out: *mut usize,
) -> SpectraStatus {
    if p.is_null() || m_out.is_null() || k_out.is_null() {
        set_error("null argument");
        return SpectraStatus::NullArgument;
    }
    *m_out = (*p).inner.size();
    *k_out = (*p).inner.ambient_dim();
    SpectraStatus::Ok
}

/// Classify a point: `class_out` receives 1 (interior), 0 (boundary) or
/// -1 (outside); `min_eig_out` the smallest eigenvalue of `Q(z)`.
///
/// # Safety
/// `z` must point to `len` doubles; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn spectra_membership(
    p: *const SpectraPencil,
    z: *const f64,
    len: usize,
    tol_abs: f64,
    class_out: *mut i32,
    min_eig_out: *mut f64,
) -> SpectraStatus {
    if p.is_null() || class_out.is_null() || min_eig_out.is_null() {
        set_error("null argument");
        return SpectraStatus::NullArgument;
    }
    let z = match slice_arg(z, len) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let tol = match tol_arg(tol_abs) {
        Ok(t) => t,
        Err(st) => return st,
    };
    match (*p).inner.membership(z, &tol) {
        Ok(v) => {
            *class_out = match v.class {
                spectrahedra::pencil::MembershipClass::Interior => 1,
                spectrahedra::pencil::MembershipClass::Boundary => 0,
                spectrahedra::pencil::MembershipClass::Outside => -1,
            };
            *min_eig_out = v.min_eigenvalue;
            SpectraStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Kernel dimension of `Q(z)` at a boundary point.
///
/// # Safety
/// `z` must point to `len` doubles; `dim_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spectra_kernel_dimension(
    p: *const SpectraPencil,
    z: *const f64,
    len: usize,
    tol_abs: f64,
    dim_out: *mut usize,
) -> SpectraStatus {
    if p.is_null() || dim_out.is_null() {
        set_error("null argument");
        return SpectraStatus::NullArgument;
    }
    let z = match slice_arg(z, len) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let tol = match tol_arg(tol_abs) {
        Ok(t) => t,
        Err(st) => return st,
    };
    match strata::kernel_dimension(&(*p).inner, z, &tol) {
        Ok(l) => {
            *dim_out = l.0;
            SpectraStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Extreme-point test at a point of `K` (interior points report false).
///
/// # Safety
/// `z` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spectra_is_extreme(
    p: *const SpectraPencil,
    z: *const f64,
    len: usize,
    tol_abs: f64,
    out: *mut i32,
) -> SpectraStatus {
    if p.is_null() || out.is_null() {
        set_error("null argument");
        return SpectraStatus::NullArgument;
    }
    let z = match slice_arg(z, len) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let tol = match tol_arg(tol_abs) {
        Ok(t) => t,
        Err(st) => return st,
    };
    match faces::is_extreme(&(*p).inner, z, &tol) {
        Ok(b) => {
            *out = b as i32;
            SpectraStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Build and verify a separation certificate from the extreme point `x`
/// against the target `y`, audit it, and return the full JSON report.
/// Returns `Unverified` when the pipeline runs but fails a check.
///
/// # Safety
/// `x` and `y` must each point to `len` doubles; `json_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spectra_certify_json(
    p: *const SpectraPencil,
    x: *const f64,
    y: *const f64,
    len: usize,
    epsilon: f64,
    grid: usize,
    samples: usize,
    seed: u64,
    tol_abs: f64,
    json_out: *mut *mut c_char,
) -> SpectraStatus {
    if p.is_null() || json_out.is_null() {
        set_error("null argument");
        return SpectraStatus::NullArgument;
    }
    let x = match slice_arg(x, len) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let y = match slice_arg(y, len) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let tol = match tol_arg(tol_abs) {
        Ok(t) => t,
        Err(st) => return st,
    };
    let pencil = &(*p).inner;
    let scfg = SectionConfig {
        grid_target: grid,
        seed,
        ..SectionConfig::default()
    };
    let run = || -> Result<(String, bool), Error> {
        let ks = build_gamma(pencil, x, y, &tol, &scfg)?;
        let cfg = CertifyConfig {
            epsilon,
            grid_target: grid,
            domination_samples: samples,
            seed,
        };
        let cert = certify::certify_separation(&ks, y, &cfg, &tol)?;
        let audit = certify::audit_certificate(pencil, &cert, &tol)?;
        let ok = cert.verified && audit.all_passed;
        let report = serde_json::json!({
            "certificate": cert,
            "audit": audit,
        });
        Ok((
            serde_json::to_string_pretty(&report).map_err(Error::from)?,
            ok,
        ))
    };
    match run() {
        Ok((text, ok)) => {
            let c = match CString::new(text) {
                Ok(c) => c,
                Err(_) => {
                    set_error("report contained an interior NUL byte");
                    return SpectraStatus::InternalError;
                }
            };
            *json_out = c.into_raw();
            if ok {
                SpectraStatus::Ok
            } else {
                set_error("certificate or audit did not verify");
                SpectraStatus::Unverified
            }
        }
        Err(e) => fail(&e),
    }
}

/// Release a string returned by this library. Passing NULL is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned through a `json_out`
/// parameter, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spectra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
