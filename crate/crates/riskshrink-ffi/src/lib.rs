//! C ABI over the `riskshrink` denoiser.
//!
//! Every function returns a [`RiskshrinkStatus`]; on failure a description is
//! available from [`riskshrink_last_error_message`] on the same thread. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use riskshrink::{Denoiser, DenoiserConfig, Error, GainRequest, ShrinkageKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskshrinkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Input = 4,
    Domain = 5,
    Io = 6,
    Wav = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskshrinkKind {
    Mse = 0,
    We = 1,
    LogMse = 2,
    Is = 3,
    IsIi = 4,
    Cosh = 5,
    Wcosh = 6,
}

impl From<RiskshrinkKind> for ShrinkageKind {
    fn from(k: RiskshrinkKind) -> Self {
        match k {
            RiskshrinkKind::Mse => ShrinkageKind::Mse,
            RiskshrinkKind::We => ShrinkageKind::We,
            RiskshrinkKind::LogMse => ShrinkageKind::LogMse,
            RiskshrinkKind::Is => ShrinkageKind::Is,
            RiskshrinkKind::IsIi => ShrinkageKind::IsII,
            RiskshrinkKind::Cosh => ShrinkageKind::Cosh,
            RiskshrinkKind::Wcosh => ShrinkageKind::Wcosh,
        }
    }
}

impl From<ShrinkageKind> for RiskshrinkKind {
    fn from(k: ShrinkageKind) -> Self {
        match k {
            ShrinkageKind::Mse => RiskshrinkKind::Mse,
            ShrinkageKind::We => RiskshrinkKind::We,
            ShrinkageKind::LogMse => RiskshrinkKind::LogMse,
            ShrinkageKind::Is => RiskshrinkKind::Is,
            ShrinkageKind::IsII => RiskshrinkKind::IsIi,
            ShrinkageKind::Cosh => RiskshrinkKind::Cosh,
            ShrinkageKind::Wcosh => RiskshrinkKind::Wcosh,
        }
    }
}

/// Mirror of the denoiser settings. Start from `riskshrink_config_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskshrinkConfig {
    pub sample_rate: u32,
    pub frame_ms: f64,
    pub overlap_fraction: f64,
    pub kind: RiskshrinkKind,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub init_noise_frames: usize,
    pub vad_threshold: f64,
    pub vad_hangover: usize,
}

impl From<&RiskshrinkConfig> for DenoiserConfig {
    fn from(c: &RiskshrinkConfig) -> Self {
        DenoiserConfig {
            sample_rate: c.sample_rate,
            frame_ms: c.frame_ms,
            overlap_fraction: c.overlap_fraction,
            kind: c.kind.into(),
            alpha: c.alpha,
            beta: c.beta,
            eta: c.eta,
            init_noise_frames: c.init_noise_frames,
            vad_threshold: c.vad_threshold,
            vad_hangover: c.vad_hangover,
        }
    }
}

impl From<&DenoiserConfig> for RiskshrinkConfig {
    fn from(c: &DenoiserConfig) -> Self {
        RiskshrinkConfig {
            sample_rate: c.sample_rate,
            frame_ms: c.frame_ms,
            overlap_fraction: c.overlap_fraction,
            kind: c.kind.into(),
            alpha: c.alpha,
            beta: c.beta,
            eta: c.eta,
            init_noise_frames: c.init_noise_frames,
            vad_threshold: c.vad_threshold,
            vad_hangover: c.vad_hangover,
        }
    }
}

/// Opaque denoiser handle.
pub struct RiskshrinkDenoiser {
    inner: Denoiser,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> RiskshrinkStatus {
    match err {
        Error::Parameter(_) => RiskshrinkStatus::InvalidArgument,
        Error::Domain(_) => RiskshrinkStatus::Domain,
        Error::Config(_) => RiskshrinkStatus::Config,
        Error::Input(_) => RiskshrinkStatus::Input,
        Error::Wav(_) => RiskshrinkStatus::Wav,
        Error::Io(_) | Error::Csv(_) => RiskshrinkStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (RiskshrinkStatus, String)>) -> RiskshrinkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RiskshrinkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RiskshrinkStatus::Panic
        }
    }
}

fn lift(err: Error) -> (RiskshrinkStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (RiskshrinkStatus, String) {
    (RiskshrinkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (RiskshrinkStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (RiskshrinkStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

#[no_mangle]
pub extern "C" fn riskshrink_config_default() -> RiskshrinkConfig {
    (&DenoiserConfig::default()).into()
}

/// Creates a denoiser. On success `*out` owns a handle to release with
/// `riskshrink_denoiser_free`; on failure it is set to NULL.
///
/// # Safety
/// `config` must point to a valid `RiskshrinkConfig` and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn riskshrink_denoiser_new(
    config: *const RiskshrinkConfig,
    out: *mut *mut RiskshrinkDenoiser,
) -> RiskshrinkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        let inner = Denoiser::new(cfg.into()).map_err(lift)?;
        *out = Box::into_raw(Box::new(RiskshrinkDenoiser { inner }));
        Ok(())
    })
}

/// # Safety
/// `denoiser` must come from `riskshrink_denoiser_new` and not be used afterwards.
/// NULL is accepted.
#[no_mangle]
pub unsafe extern "C" fn riskshrink_denoiser_free(denoiser: *mut RiskshrinkDenoiser) {
    if !denoiser.is_null() {
        drop(Box::from_raw(denoiser));
    }
}

/// Denoises `len` samples from `input` into `output`. The buffers may be
/// the same; they must not otherwise overlap.
///
/// # Safety
/// `input` must be readable and `output` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn riskshrink_denoiser_process(
    denoiser: *const RiskshrinkDenoiser,
    input: *const f64,
    len: usize,
    output: *mut f64,
) -> RiskshrinkStatus {
    guard(|| {
        let d = denoiser.as_ref().ok_or_else(|| null("denoiser"))?;
        if input.is_null() {
            return Err(null("input"));
        }
        if output.is_null() {
            return Err(null("output"));
        }
        let result = {
            let samples = std::slice::from_raw_parts(input, len);
            d.inner.process(samples).map_err(lift)?
        };
        ptr::copy(result.samples.as_ptr(), output, len);
        Ok(())
    })
}

/// Gain of `kind` at a-posteriori SNR `xi` with over-subtraction `alpha`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn riskshrink_gain(kind: RiskshrinkKind, xi: f64, alpha: f64, out: *mut f64) -> RiskshrinkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let req = GainRequest::new(xi, alpha).map_err(lift)?;
        *out = riskshrink::gain(kind.into(), req);
        Ok(())
    })
}

/// Reads a 16-bit mono WAV, denoises it and writes the result.
///
/// # Safety
/// Paths must be NUL-terminated UTF-8; `config` must be valid.
#[no_mangle]
pub unsafe extern "C" fn riskshrink_denoise_file(
    in_path: *const c_char,
    out_path: *const c_char,
    config: *const RiskshrinkConfig,
) -> RiskshrinkStatus {
    guard(|| {
        let input = path_arg(in_path, "in_path")?;
        let output = path_arg(out_path, "out_path")?;
        let cfg = config.as_ref().ok_or_else(|| null("config"))?;
        riskshrink::denoise_file(input, output, &cfg.into()).map_err(lift)?;
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn riskshrink_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn riskshrink_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
