//! C interface to the `tllvlc` channel, lens and outage models.
//!
//! Every entry point returns a [`TllStatus`]; on failure the message is
//! available from [`tll_last_error_message`] on the same thread. Angles
//! are in radians. Handles come from `tll_params_new` or
//! `tll_params_from_config` and are released with `tll_params_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tllvlc::channel::{snr, Scheme};
use tllvlc::cli::{apply_config, parse_config, ExperimentConfig};
use tllvlc::lens::{bsr_tilt_exact, lens_state_for_tilt, LensState};
use tllvlc::outage::{
    bsr_outage_closed, outage_monte_carlo, outage_quadrature, vulo_outage_chain, vulo_outage_closed, OutageResult,
};
use tllvlc::{Error, Pose};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TllStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    /// No lens setting realises the request (tilt bounds, critical angle, voltage limit).
    Infeasible = 4,
    /// Argument outside the domain of a model formula.
    DomainError = 5,
    /// The evaluator does not cover this scheme.
    Unsupported = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Receiver schemes, as accepted by the `scheme` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TllScheme {
    Bsr = 0,
    Vulo = 1,
    FixedLens = 2,
    NoLens = 3,
}

/// Receiver position and orientation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TllPose {
    pub r: f64,
    pub theta: f64,
    pub theta_r: f64,
    pub phi_r: f64,
}

/// Outage estimate. `std_error` is NaN for deterministic evaluators;
/// `converged` is 1 or 0 for quadrature and −1 otherwise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TllOutage {
    pub p_out: f64,
    pub std_error: f64,
    pub samples: u64,
    pub converged: i32,
    pub warnings: u32,
}

/// Surface tilt, contact angles and wall voltages, walls ordered
/// x-left, x-right, y-left, y-right.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TllLensState {
    pub psi_x: f64,
    pub psi_y: f64,
    pub contact: [f64; 4],
    pub voltage: [f64; 4],
}

/// Opaque parameter set.
pub struct TllParams {
    cfg: ExperimentConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(TllStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Infeasible
            | Error::TiltNotActuatable { .. }
            | Error::VoltageExceedsWettingLimit(_)
            | Error::UnreachableContactAngle(_) => TllStatus::Infeasible,
            Error::InvalidParameter(_) => TllStatus::InvalidArgument,
            Error::Config { .. } => TllStatus::ConfigError,
            Error::DegenerateGeometry
            | Error::IncidentFromBelow(_)
            | Error::BetaPole(..)
            | Error::EndpointSingularity { .. }
            | Error::UnsupportedDomain(_) => TllStatus::DomainError,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> TllStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TllStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TllStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TllStatus::NullPointer, format!("{what} is null"))
}

unsafe fn params_ref<'a>(p: *const TllParams) -> Result<&'a TllParams, Failure> {
    p.as_ref().ok_or_else(|| null("params"))
}

unsafe fn out_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null("output pointer"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(TllStatus::InvalidArgument, "text is not UTF-8".into()))
}

fn to_scheme(code: u32) -> Result<Scheme, Failure> {
    Scheme::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Failure(TllStatus::InvalidArgument, format!("unknown scheme {code}")))
}

fn checked(p: &TllParams) -> Result<tllvlc::SystemParams, Failure> {
    let sp = p.cfg.params();
    sp.validate()?;
    Ok(sp)
}

fn to_outage(r: &OutageResult) -> TllOutage {
    TllOutage {
        p_out: r.p_out,
        std_error: r.stderr.unwrap_or(f64::NAN),
        samples: r.samples,
        converged: r.converged.map_or(-1, i32::from),
        warnings: r.warnings.len() as u32,
    }
}

fn to_lens(s: &LensState) -> TllLensState {
    TllLensState {
        psi_x: s.psi_x,
        psi_y: s.psi_y,
        contact: s.contact,
        voltage: s.voltage,
    }
}

fn to_pose(p: &TllPose) -> Result<Pose, Failure> {
    if ![p.r, p.theta, p.theta_r, p.phi_r].iter().all(|v| v.is_finite()) || p.r < 0.0 {
        return Err(Failure(TllStatus::InvalidArgument, "pose must be finite with r >= 0".into()));
    }
    Ok(Pose::new(p.r, p.theta, p.theta_r, p.phi_r))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tll_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// New handle with the default parameters, or null on allocation failure.
#[no_mangle]
pub extern "C" fn tll_params_new() -> *mut TllParams {
    catch_unwind(|| {
        Box::into_raw(Box::new(TllParams {
            cfg: ExperimentConfig::default(),
        }))
    })
    .unwrap_or(ptr::null_mut())
}

/// Parse config text (`key = value` lines) into a new handle.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tll_params_from_config(config: *const c_char, out: *mut *mut TllParams) -> TllStatus {
    guard(|| {
        let out = out_mut(out)?;
        let cfg = parse_config(text(config)?)?;
        *out = Box::into_raw(Box::new(TllParams { cfg }));
        Ok(())
    })
}

/// Apply config lines to an existing handle; on error it is unchanged.
///
/// # Safety
/// `params` must come from this library; `config` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn tll_params_apply(params: *mut TllParams, config: *const c_char) -> TllStatus {
    guard(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        apply_config(&mut p.cfg, text(config)?)?;
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `params` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tll_params_free(params: *mut TllParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Check the parameter set as a whole.
///
/// # Safety
/// `params` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn tll_params_validate(params: *const TllParams) -> TllStatus {
    guard(|| checked(params_ref(params)?).map(|_| ()))
}

/// SNR of `scheme` at `pose`.
///
/// # Safety
/// `params` must come from this library; `pose` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tll_snr(params: *const TllParams, scheme: u32, pose: *const TllPose, out: *mut f64) -> TllStatus {
    guard(|| {
        let sp = checked(params_ref(params)?)?;
        let pose = to_pose(pose.as_ref().ok_or_else(|| null("pose"))?)?;
        *out_mut(out)? = snr(&pose, to_scheme(scheme)?, &sp);
        Ok(())
    })
}

/// Analytic outage: exact for BSR, the convolution formula for VULO.
/// Other schemes report `Unsupported`.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tll_outage_closed(
    params: *const TllParams,
    scheme: u32,
    gamma_th: f64,
    out: *mut TllOutage,
) -> TllStatus {
    guard(|| {
        let p = params_ref(params)?;
        let sp = checked(p)?;
        let r = match to_scheme(scheme)? {
            Scheme::Bsr if sp.bsr_mode == tllvlc::channel::BsrMode::Ideal => bsr_outage_closed(gamma_th, &sp),
            Scheme::Vulo => vulo_outage_closed(gamma_th, &sp, &p.cfg.rules())?,
            s => return Err(Failure(TllStatus::Unsupported, format!("no closed form for {s}"))),
        };
        *out_mut(out)? = to_outage(&r);
        Ok(())
    })
}

/// VULO outage from the distribution-chain approximation.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tll_outage_vulo_chain(params: *const TllParams, gamma_th: f64, out: *mut TllOutage) -> TllStatus {
    guard(|| {
        let p = params_ref(params)?;
        let sp = checked(p)?;
        *out_mut(out)? = to_outage(&vulo_outage_chain(gamma_th, &sp, &p.cfg.rules()));
        Ok(())
    })
}

/// Outage by deterministic quadrature over position and orientation.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tll_outage_quadrature(
    params: *const TllParams,
    scheme: u32,
    gamma_th: f64,
    out: *mut TllOutage,
) -> TllStatus {
    guard(|| {
        let p = params_ref(params)?;
        let sp = checked(p)?;
        let r = outage_quadrature(to_scheme(scheme)?, gamma_th, &sp, &p.cfg.quadrature_spec())
            .map_err(|e| Failure(TllStatus::Unsupported, e.to_string()))?;
        *out_mut(out)? = to_outage(&r);
        Ok(())
    })
}

/// Monte Carlo outage over `samples` poses of the stream keyed by `seed`.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tll_outage_monte_carlo(
    params: *const TllParams,
    scheme: u32,
    gamma_th: f64,
    samples: u64,
    seed: u64,
    out: *mut TllOutage,
) -> TllStatus {
    guard(|| {
        let sp = checked(params_ref(params)?)?;
        if samples == 0 {
            return Err(Failure(TllStatus::InvalidArgument, "samples must be positive".into()));
        }
        *out_mut(out)? = to_outage(&outage_monte_carlo(to_scheme(scheme)?, gamma_th, &sp, samples, seed));
        Ok(())
    })
}

/// Lens setting that aligns the refracted ray with the receiver axis,
/// within the configured tilt bounds and voltage limit.
///
/// # Safety
/// `params` must come from this library; `pose` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tll_bsr_solve(params: *const TllParams, pose: *const TllPose, out: *mut TllLensState) -> TllStatus {
    guard(|| {
        let sp = checked(params_ref(params)?)?;
        let pose = to_pose(pose.as_ref().ok_or_else(|| null("pose"))?)?;
        let (px, py) = bsr_tilt_exact(&pose, &sp, &sp.bounds)?;
        *out_mut(out)? = to_lens(&lens_state_for_tilt(px, py, &sp.lens)?);
        Ok(())
    })
}

/// Contact angles and voltages holding the surface at `(psi_x, psi_y)`.
///
/// # Safety
/// `params` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tll_lens_state(params: *const TllParams, psi_x: f64, psi_y: f64, out: *mut TllLensState) -> TllStatus {
    guard(|| {
        let sp = checked(params_ref(params)?)?;
        if !sp.bounds.contains(psi_x) || !sp.bounds.contains(psi_y) {
            return Err(Failure(TllStatus::Infeasible, "tilt outside the configured bounds".into()));
        }
        *out_mut(out)? = to_lens(&lens_state_for_tilt(psi_x, psi_y, &sp.lens)?);
        Ok(())
    })
}
