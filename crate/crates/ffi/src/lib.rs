//! C ABI over the `o2deg` engine.
//!
//! Every function returns an [`O2degStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with the matching
//! `*_free` function. Strings returned by the library are owned by the caller
//! and released with [`o2deg_string_free`]. The message for the most recent
//! failure on the calling thread is available from [`o2deg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use o2deg::burnside::Element;
use o2deg::characters::GammaShape;
use o2deg::config::parse_config;
use o2deg::geometry::{boundary_radius, curvature, grad_norm_on_c, DomainSpec};
use o2deg::pipeline::{default_level, Engine};
use o2deg::rep::Component;
use o2deg::report::{render_machine, run_analyze, Outcome, RunFlags};
use o2deg::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2degStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    Consistency = 5,
    Geometry = 6,
    Internal = 7,
    Panic = 8,
}

/// Group shape selector for [`o2deg_engine_new`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2degGroupKind {
    Dihedral = 0,
    Cyclic = 1,
}

/// Outcome of [`o2deg_analyze_json`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum O2degOutcome {
    Certificates = 0,
    NoCertificates = 10,
    HypothesesFailed = 20,
}

/// Degree engine for one `Gamma` at a fixed truncation level.
pub struct O2degEngine(Engine);

/// Element of the Burnside ring, tied to the engine that produced it.
pub struct O2degElement(Element);

/// Planar domain.
pub struct O2degDomain(DomainSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> O2degStatus {
    match e {
        Error::Config(_) | Error::Parse(_) => O2degStatus::Config,
        Error::InvalidParameter(_) | Error::UnsupportedGroup(_) | Error::EnumerationTooLarge { .. } | Error::InadmissibleLevel { .. } => O2degStatus::InvalidArgument,
        Error::NotStarShaped(_) | Error::VanishingGradient(_) | Error::Singularity(_) => O2degStatus::Geometry,
        Error::Consistency(_) | Error::Instability(_) | Error::InconsistentDegree { .. } | Error::IncompleteLattice(_) | Error::ClassEscape(_) => O2degStatus::Consistency,
        Error::Precision(_) => O2degStatus::Internal,
    }
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (O2degStatus, String)>) -> O2degStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            O2degStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside o2deg");
            O2degStatus::Panic
        }
    }
}

fn lib<T>(r: o2deg::Result<T>) -> Result<T, (O2degStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (O2degStatus, String) {
    (O2degStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (O2degStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| (O2degStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn o2deg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn o2deg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn o2deg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an engine for `O(2) x Gamma x Z2`. `level = 0` picks the default
/// level for Fourier modes `0..=max_mode`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn o2deg_engine_new(kind: O2degGroupKind, n: u32, level: u32, max_mode: u32, out: *mut *mut O2degEngine) -> O2degStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let shape = match kind {
            O2degGroupKind::Dihedral => GammaShape::Dihedral(n as usize),
            O2degGroupKind::Cyclic => GammaShape::Cyclic(n as usize),
        };
        let m = if level == 0 { lib(default_level(shape, &(0..=max_mode as usize).collect::<Vec<_>>()))? } else { level as usize };
        let e = lib(Engine::new(shape, m))?;
        *out = Box::into_raw(Box::new(O2degEngine(e)));
        Ok(())
    })
}

/// # Safety
/// `e` must come from [`o2deg_engine_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn o2deg_engine_free(e: *mut O2degEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_engine_level(e: *const O2degEngine, out: *mut u32) -> O2degStatus {
    guard(|| {
        let (Some(e), false) = (e.as_ref(), out.is_null()) else { return Err(null()) };
        *out = e.0.level() as u32;
        Ok(())
    })
}

/// Number of minus-type irreducibles (valid `irrep` indices).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_engine_irrep_count(e: *const O2degEngine, out: *mut u32) -> O2degStatus {
    guard(|| {
        let (Some(e), false) = (e.as_ref(), out.is_null()) else { return Err(null()) };
        *out = e.0.irreps().len() as u32;
        Ok(())
    })
}

/// Basic degree of the component with Fourier mode `mode` and irreducible
/// `irrep`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_basic_degree(e: *mut O2degEngine, mode: u32, irrep: u32, out: *mut *mut O2degElement) -> O2degStatus {
    guard(|| {
        let (Some(e), false) = (e.as_mut(), out.is_null()) else { return Err(null()) };
        if irrep as usize >= e.0.irreps().len() {
            return Err((O2degStatus::InvalidArgument, format!("irrep index {irrep} out of range")));
        }
        let d = lib(e.0.basic_degree(Component::new(mode as usize, irrep as usize)))?;
        *out = Box::into_raw(Box::new(O2degElement(d)));
        Ok(())
    })
}

/// Unit `(G)` of the Burnside ring.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_unit(e: *const O2degEngine, out: *mut *mut O2degElement) -> O2degStatus {
    guard(|| {
        let (Some(e), false) = (e.as_ref(), out.is_null()) else { return Err(null()) };
        *out = Box::into_raw(Box::new(O2degElement(e.0.unit())));
        Ok(())
    })
}

/// Product `a * b` in the Burnside ring.
///
/// # Safety
/// Pointers must be valid; `a` and `b` must come from the same engine.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_multiply(e: *mut O2degEngine, a: *const O2degElement, b: *const O2degElement, out: *mut *mut O2degElement) -> O2degStatus {
    guard(|| {
        let (Some(e), Some(a), Some(b), false) = (e.as_mut(), a.as_ref(), b.as_ref(), out.is_null()) else { return Err(null()) };
        let p = lib(a.0.multiply(&b.0, e.0.lattice(), None))?;
        *out = Box::into_raw(Box::new(O2degElement(p)));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_equal(a: *const O2degElement, b: *const O2degElement, out: *mut bool) -> O2degStatus {
    guard(|| {
        let (Some(a), Some(b), false) = (a.as_ref(), b.as_ref(), out.is_null()) else { return Err(null()) };
        *out = a.0 == b.0;
        Ok(())
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_len(a: *const O2degElement, out: *mut u32) -> O2degStatus {
    guard(|| {
        let (Some(a), false) = (a.as_ref(), out.is_null()) else { return Err(null()) };
        *out = a.0.len() as u32;
        Ok(())
    })
}

/// Amalgamated-notation rendering; free with [`o2deg_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_to_string(a: *const O2degElement, out: *mut *mut c_char) -> O2degStatus {
    guard(|| {
        let (Some(a), false) = (a.as_ref(), out.is_null()) else { return Err(null()) };
        *out = owned(a.0.to_string());
        Ok(())
    })
}

/// # Safety
/// `a` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn o2deg_element_free(a: *mut O2degElement) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Full analysis of a JSON configuration. The JSON report is written to
/// `report` (free with [`o2deg_string_free`]) and the outcome to `outcome`.
///
/// # Safety
/// Pointers must be valid; `config` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn o2deg_analyze_json(config: *const c_char, skip_geometry: bool, report: *mut *mut c_char, outcome: *mut O2degOutcome) -> O2degStatus {
    guard(|| {
        if report.is_null() || outcome.is_null() {
            return Err(null());
        }
        let cfg = lib(parse_config(text(config)?))?;
        let doc = lib(run_analyze(&cfg, RunFlags { skip_geometry, ..Default::default() }))?;
        *outcome = match doc.outcome {
            Outcome::Certificates => O2degOutcome::Certificates,
            Outcome::NoCertificates => O2degOutcome::NoCertificates,
            Outcome::HypothesesFailed => O2degOutcome::HypothesesFailed,
        };
        *report = owned(render_machine(&doc));
        Ok(())
    })
}

/// Domain from its JSON description (`eta`, `symmetry`, `radius`, ...).
///
/// # Safety
/// Pointers must be valid; `json` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn o2deg_domain_from_json(json: *const c_char, out: *mut *mut O2degDomain) -> O2degStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let d: DomainSpec = serde_json::from_str(text(json)?).map_err(|e| (O2degStatus::Config, e.to_string()))?;
        lib(d.validate())?;
        *out = Box::into_raw(Box::new(O2degDomain(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn o2deg_domain_free(d: *mut O2degDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn domain_eval(d: *const O2degDomain, out: *mut f64, f: impl FnOnce(&DomainSpec) -> o2deg::Result<f64>) -> O2degStatus {
    guard(|| {
        let (Some(d), false) = (d.as_ref(), out.is_null()) else { return Err(null()) };
        *out = lib(f(&d.0))?;
        Ok(())
    })
}

/// Boundary radius in direction `theta`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_domain_boundary_radius(d: *const O2degDomain, theta: f64, out: *mut f64) -> O2degStatus {
    domain_eval(d, out, |d| boundary_radius(d, theta))
}

/// Boundary curvature in direction `theta` (outward normal convention).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_domain_curvature(d: *const O2degDomain, theta: f64, out: *mut f64) -> O2degStatus {
    domain_eval(d, out, |d| curvature(d, theta))
}

/// `|grad eta|` at the boundary point in direction `theta`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn o2deg_domain_grad_norm(d: *const O2degDomain, theta: f64, out: *mut f64) -> O2degStatus {
    domain_eval(d, out, |d| grad_norm_on_c(d, theta))
}
