//! C ABI over `stereo_uncertainty`.
//!
//! Every fallible call returns an [`SuStatus`] and writes its result through
//! an out pointer. On failure a message is kept per thread and can be read
//! with [`su_last_error`]. Handles are opaque and must be released with the
//! matching `*_free` function. Angles cross the boundary in degrees, times in
//! seconds and levels in dB.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use stereo_uncertainty::error::Error;
use stereo_uncertainty::frontend::{binaural_cues, Filterbank};
use stereo_uncertainty::geometry::{
    relative_panning, tau_overlap, PanningPoint, RelativeMethod, SPEED_OF_SOUND,
};
use stereo_uncertainty::panning::{psr_design, WilliamsCurves};
use stereo_uncertainty::render::{
    default_analytic_set, load_hrir_set, render, stereo_pair_sources, EarSignals, HrirSet, RenderOptions,
};
use stereo_uncertainty::stimuli::generate;
use stereo_uncertainty::sweep::SweepConfig;
use stereo_uncertainty::uncertainty::{
    build_dictionary, localization_uncertainty, score_cues, DictionaryConfig, FreeFieldDictionary, ModelOptions,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    MissingResource = 3,
    Io = 4,
    MalformedData = 5,
    Numerical = 6,
    Panic = 7,
}

impl From<&Error> for SuStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MissingResource(_) => SuStatus::MissingResource,
            Error::Io(_) => SuStatus::Io,
            Error::Json(_)
            | Error::MalformedHrir(_)
            | Error::UnsortedAzimuths { .. }
            | Error::InconsistentIrLength { .. }
            | Error::EmptyHrirSet
            | Error::DictionaryMismatch(_) => SuStatus::MalformedData,
            Error::Numerical(_)
            | Error::SilentBand
            | Error::SilentInput
            | Error::DegenerateDictionaryBand { .. } => SuStatus::Numerical,
            _ => SuStatus::InvalidArgument,
        }
    }
}

/// Opaque HRIR set.
pub struct SuHrirSet(HrirSet);

/// Opaque free-field dictionary.
pub struct SuDictionary(FreeFieldDictionary);

/// Relative panning point seen from an off-centre listener.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SuRelativePanning {
    pub rictd_s: f64,
    pub ricld_db: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SuPsrDesign {
    pub d_m: f64,
    pub base_angle_deg: f64,
    pub ictd_max_s: f64,
    pub icld_w_db: f64,
    pub beta_deg: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SuUncertainty {
    /// Raw circular spread, 1 - |resultant|.
    pub h: f64,
    /// Spread rescaled so that the best free-field source scores 0.
    pub h_bar: f64,
    /// Likelihood maximum on the dictionary grid.
    pub peak_deg: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), SuStatus>) -> SuStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SuStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SuStatus::Panic
        }
    }
}

fn fail(e: Error) -> SuStatus {
    let status = SuStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> SuStatus {
    set_error(format!("null pointer: {what}"));
    SuStatus::NullPointer
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, SuStatus> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(PathBuf::from)
        .map_err(|_| fail(Error::InvalidParameter("path is not valid UTF-8".into())))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), SuStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn su_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Closed-form interaural delay at which the two loudspeaker arrivals
/// overlap for a centred listener.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_tau_overlap(
    head_radius_m: f64,
    ear_angle_deg: f64,
    base_angle_deg: f64,
    speed_of_sound: f64,
    out_s: *mut f64,
) -> SuStatus {
    guard(|| {
        if !(head_radius_m > 0.0 && speed_of_sound > 0.0) {
            return Err(fail(Error::InvalidParameter("radius and speed of sound must be positive".into())));
        }
        let t = tau_overlap(head_radius_m, ear_angle_deg.to_radians(), base_angle_deg.to_radians(), speed_of_sound);
        write(out_s, t)
    })
}

/// Relative ICTD/ICLD for a listener at `(x_m, y_m)`, default head.
/// `exact` selects exact ear paths over the small-offset approximation.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_relative_panning(
    ictd_s: f64,
    icld_db: f64,
    x_m: f64,
    y_m: f64,
    base_angle_deg: f64,
    distance_m: f64,
    exact: bool,
    out: *mut SuRelativePanning,
) -> SuStatus {
    guard(|| {
        let config = SweepConfig {
            base_angle_deg,
            loudspeaker_distance_m: distance_m,
            ..SweepConfig::default()
        };
        let setup = config.setup().map_err(fail)?;
        let pose = config.pose(x_m, y_m).map_err(fail)?;
        let method = if exact { RelativeMethod::ExactPath } else { RelativeMethod::PrintedApproximation };
        let r = relative_panning(PanningPoint::new(ictd_s, icld_db), &pose, &setup, method);
        write(out, SuRelativePanning { rictd_s: r.rictd, ricld_db: r.ricld })
    })
}

/// Designs a PSR arrangement for microphone distance `d_m` using the
/// built-in Williams curves and 343 m/s.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_psr_design(d_m: f64, base_angle_deg: f64, out: *mut SuPsrDesign) -> SuStatus {
    guard(|| {
        let design = psr_design(d_m, base_angle_deg.to_radians(), &WilliamsCurves::default(), SPEED_OF_SOUND)
            .map_err(fail)?;
        write(
            out,
            SuPsrDesign {
                d_m: design.d,
                base_angle_deg: design.phi0.to_degrees(),
                ictd_max_s: design.ictd_max,
                icld_w_db: design.icld_w,
                beta_deg: design.beta.to_degrees(),
            },
        )
    })
}

/// Built-in spherical-head HRIR set.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_hrir_set_analytic(out: *mut *mut SuHrirSet) -> SuStatus {
    guard(|| write(out, Box::into_raw(Box::new(SuHrirSet(default_analytic_set())))))
}

/// Loads an HRIR set from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_hrir_set_load(path: *const c_char, out: *mut *mut SuHrirSet) -> SuStatus {
    guard(|| {
        let path = path_arg(path)?;
        let set = load_hrir_set(&path).map_err(fail)?;
        write(out, Box::into_raw(Box::new(SuHrirSet(set))))
    })
}

/// # Safety
/// `set` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn su_hrir_set_free(set: *mut SuHrirSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Builds the free-field dictionary with default settings.
///
/// # Safety
/// `hrirs` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_dictionary_build(hrirs: *const SuHrirSet, out: *mut *mut SuDictionary) -> SuStatus {
    guard(|| {
        let hrirs = hrirs.as_ref().ok_or_else(|| null("hrirs"))?;
        let dict = build_dictionary(&hrirs.0, &DictionaryConfig::default()).map_err(fail)?;
        write(out, Box::into_raw(Box::new(SuDictionary(dict))))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_dictionary_load(path: *const c_char, out: *mut *mut SuDictionary) -> SuStatus {
    guard(|| {
        let path = path_arg(path)?;
        let dict = FreeFieldDictionary::load(&path).map_err(fail)?;
        write(out, Box::into_raw(Box::new(SuDictionary(dict))))
    })
}

/// # Safety
/// `dict` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn su_dictionary_save(dict: *const SuDictionary, path: *const c_char) -> SuStatus {
    guard(|| {
        let dict = dict.as_ref().ok_or_else(|| null("dict"))?;
        let path = path_arg(path)?;
        dict.0.save(&path).map_err(fail)
    })
}

/// Lowest free-field self-score, used to rescale h.
///
/// # Safety
/// `dict` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_dictionary_h_min(dict: *const SuDictionary, out: *mut f64) -> SuStatus {
    guard(|| {
        let dict = dict.as_ref().ok_or_else(|| null("dict"))?;
        write(out, dict.0.h_min)
    })
}

/// # Safety
/// `dict` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn su_dictionary_free(dict: *mut SuDictionary) {
    if !dict.is_null() {
        drop(Box::from_raw(dict));
    }
}

/// Uncertainty of a loudspeaker-pair panning point for a listener at
/// `(x_m, y_m)`: 60 degree base, 2 m, default stimulus and model.
///
/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_analyze_stereo(
    hrirs: *const SuHrirSet,
    dict: *const SuDictionary,
    ictd_s: f64,
    icld_db: f64,
    x_m: f64,
    y_m: f64,
    out: *mut SuUncertainty,
) -> SuStatus {
    guard(|| {
        let hrirs = &hrirs.as_ref().ok_or_else(|| null("hrirs"))?.0;
        let dict = &dict.as_ref().ok_or_else(|| null("dict"))?.0;
        if ictd_s.abs() > 1e-3 + 1e-12 {
            return Err(fail(Error::BeyondSummingRegime { ictd_ms: ictd_s * 1e3 }));
        }
        let config = SweepConfig::default();
        let setup = config.setup().map_err(fail)?;
        let pose = config.pose(x_m, y_m).map_err(fail)?;
        let run = || -> stereo_uncertainty::error::Result<SuUncertainty> {
            let bank = Filterbank::new(dict.provenance.filterbank)?;
            let signal = generate(&config.stimulus)?;
            let sources = stereo_pair_sources(&signal, PanningPoint::new(ictd_s, icld_db), &setup, &pose)?;
            let opts = RenderOptions { sample_rate: dict.provenance.filterbank.sample_rate, ..RenderOptions::default() };
            let ears = render(&sources, hrirs, &opts)?;
            let r = score_cues(&binaural_cues(&ears, &bank)?, dict, &config.model)?;
            Ok(SuUncertainty { h: r.h, h_bar: r.h_bar, peak_deg: r.likelihood.argmax_deg() })
        };
        write(out, run().map_err(fail)?)
    })
}

/// Uncertainty of arbitrary ear signals of `len` samples each, sampled at
/// the dictionary's rate.
///
/// # Safety
/// `left` and `right` must each point to `len` readable doubles; `dict`
/// must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su_localization_uncertainty(
    dict: *const SuDictionary,
    left: *const f64,
    right: *const f64,
    len: usize,
    out: *mut SuUncertainty,
) -> SuStatus {
    guard(|| {
        let dict = &dict.as_ref().ok_or_else(|| null("dict"))?.0;
        if left.is_null() || right.is_null() {
            return Err(null("signal"));
        }
        let ears = EarSignals {
            left: std::slice::from_raw_parts(left, len).to_vec(),
            right: std::slice::from_raw_parts(right, len).to_vec(),
            sample_rate: dict.provenance.filterbank.sample_rate,
            latency: 0,
        };
        let run = || -> stereo_uncertainty::error::Result<SuUncertainty> {
            let bank = Filterbank::new(dict.provenance.filterbank)?;
            let r = localization_uncertainty(&ears, dict, &bank, &ModelOptions::default())?;
            Ok(SuUncertainty { h: r.h, h_bar: r.h_bar, peak_deg: r.likelihood.argmax_deg() })
        };
        write(out, run().map_err(fail)?)
    })
}
