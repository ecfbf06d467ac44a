//! C ABI over `evenspin`.
//!
//! Every function returns an [`EsStatus`]; results go through out-pointers
//! that are written only on `ES_STATUS_OK`. A system is an opaque handle
//! created by [`es_system_new`] and released by [`es_system_free`]. The text
//! of the most recent error on the calling thread is available from
//! [`es_last_error_message`]. Panics never cross the boundary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use evenspin::bell::{bell_correlation, two_particle_spectrum, BellSetting, TwoParticleSystem};
use evenspin::even_spin::{build_even_spin, even_spin_spectrum};
use evenspin::extended::robinson_radius;
use evenspin::little_algebra::FrameTriad;
use evenspin::suite::point_suite;
use evenspin::{build_dirac_set, Error, FourMomentum, Tolerance, Vec3};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Shape = 3,
    Contract = 4,
    CheckFailed = 5,
    TranscriptionSuspect = 6,
    Panic = 7,
}

/// Opaque one- and two-particle state for a fixed four-momentum.
pub struct EsSystem {
    momentum: FourMomentum,
    pair: TwoParticleSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EsStatus {
    match e {
        Error::Shape(_) => EsStatus::Shape,
        Error::Domain(_) => EsStatus::Domain,
        Error::Contract(_) => EsStatus::Contract,
        Error::CheckFailed { .. } => EsStatus::CheckFailed,
        Error::TranscriptionSuspect(_) => EsStatus::TranscriptionSuspect,
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), EsStatus>) -> EsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EsStatus::Panic
        }
    }
}

fn lift<T>(r: evenspin::Result<T>) -> Result<T, EsStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> EsStatus {
    set_error(format!("null pointer: {what}"));
    EsStatus::NullPointer
}

/// # Safety
/// `p` must be null or valid for reading.
unsafe fn system<'a>(p: *const EsSystem) -> Result<&'a EsSystem, EsStatus> {
    p.as_ref().ok_or_else(|| null("system"))
}

/// # Safety
/// `p` must be null or valid for reading three doubles.
unsafe fn vec3(p: *const f64, what: &str) -> Result<Vec3, EsStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, 3);
    Ok(Vec3::new(s[0], s[1], s[2]))
}

fn out<T>(p: *mut T, what: &str) -> Result<*mut T, EsStatus> {
    if p.is_null() {
        Err(null(what))
    } else {
        Ok(p)
    }
}

/// Creates a system for mass `m` and momentum `(px, py, pz)`.
///
/// # Safety
/// `out_sys` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn es_system_new(m: f64, px: f64, py: f64, pz: f64, out_sys: *mut *mut EsSystem) -> EsStatus {
    guard(|| {
        let dst = out(out_sys, "out_sys")?;
        let momentum = lift(FourMomentum::new(m, Vec3::new(px, py, pz)))?;
        let pair = lift(TwoParticleSystem::new(momentum))?;
        *dst = Box::into_raw(Box::new(EsSystem { momentum, pair }));
        Ok(())
    })
}

/// Releases a system. Null is a no-op.
///
/// # Safety
/// `sys` must be null or come from [`es_system_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn es_system_free(sys: *mut EsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Energy `p0 = sqrt(m^2 + |p|^2)`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn es_energy(sys: *const EsSystem, out_energy: *mut f64) -> EsStatus {
    guard(|| {
        let s = system(sys)?;
        *out(out_energy, "out_energy")? = s.momentum.energy();
        Ok(())
    })
}

/// Ascending eigenvalues of the even spin projected on unit vector `(ax, ay, az)`.
///
/// # Safety
/// `out_values` must be valid for writing four doubles.
#[no_mangle]
pub unsafe extern "C" fn es_even_spin_eigenvalues(
    sys: *const EsSystem,
    ax: f64,
    ay: f64,
    az: f64,
    out_values: *mut f64,
) -> EsStatus {
    guard(|| {
        let s = system(sys)?;
        let dst = out(out_values, "out_values")?;
        let fm = s.momentum;
        let es = lift(build_even_spin(&build_dirac_set(fm), &FrameTriad::for_momentum(fm.momentum())))?;
        let spec = lift(even_spin_spectrum(&es, Vec3::new(ax, ay, az)))?;
        std::ptr::copy_nonoverlapping(spec.values.as_ptr(), dst, 4);
        Ok(())
    })
}

/// Singlet correlation for unit detector directions `a` and `b`, from the
/// closed form and from direct contraction.
///
/// # Safety
/// `a` and `b` must point to three doubles; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn es_bell_correlation(
    sys: *const EsSystem,
    a: *const f64,
    b: *const f64,
    out_formula: *mut f64,
    out_numeric: *mut f64,
) -> EsStatus {
    guard(|| {
        let s = system(sys)?;
        let (a, b) = (vec3(a, "a")?, vec3(b, "b")?);
        let (f, n) = (out(out_formula, "out_formula")?, out(out_numeric, "out_numeric")?);
        let setting = lift(BellSetting::new(a, b))?;
        let c = lift(bell_correlation(&s.pair, &setting))?;
        *f = c.e_formula;
        *n = c.e_numeric;
        Ok(())
    })
}

/// Ascending eigenvalues of the squared total even spin on the 16-dimensional pair space.
///
/// # Safety
/// `out_values` must be valid for writing sixteen doubles.
#[no_mangle]
pub unsafe extern "C" fn es_two_particle_eigenvalues(sys: *const EsSystem, out_values: *mut f64) -> EsStatus {
    guard(|| {
        let s = system(sys)?;
        let dst = out(out_values, "out_values")?;
        let spec = lift(two_particle_spectrum(&s.pair))?;
        std::ptr::copy_nonoverlapping(spec.values.as_ptr(), dst, 16);
        Ok(())
    })
}

/// Runs every identity check at this momentum with a uniform tolerance.
/// `out_passed` receives 1 if all hold, else 0; `out_count` the number of checks.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn es_verify(
    sys: *const EsSystem,
    tol: f64,
    out_passed: *mut i32,
    out_count: *mut usize,
) -> EsStatus {
    guard(|| {
        let s = system(sys)?;
        let (p, c) = (out(out_passed, "out_passed")?, out(out_count, "out_count")?);
        if !(tol > 0.0) {
            set_error(format!("tolerance must be positive, got {tol}"));
            return Err(EsStatus::Domain);
        }
        let report = lift(point_suite(&s.momentum, Tolerance::uniform(tol)))?;
        *p = i32::from(report.passed());
        *c = report.checks.len();
        Ok(())
    })
}

/// Signed ring radius `s / |p|` of a massless particle of helicity `s`.
///
/// # Safety
/// `out_radius` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn es_robinson_radius(s: f64, p_mag: f64, out_radius: *mut f64) -> EsStatus {
    guard(|| {
        let dst = out(out_radius, "out_radius")?;
        *dst = lift(robinson_radius(s, p_mag))?;
        Ok(())
    })
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `len`. Returns the full message length excluding the NUL,
/// or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or valid for writing `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn es_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}
