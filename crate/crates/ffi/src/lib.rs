//! C ABI over the `risbench` library.
//!
//! Every function returns an [`RbStatus`]; results go through out-pointers.
//! Objects (materials, study configurations, CDF tables) are opaque handles
//! created by `rb_*_new`/`rb_*_from_*` and released with the matching
//! `rb_*_free`. After a failure, `rb_last_error_message` describes it; the
//! message is per thread and valid until the next failing call on that
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use risbench::cli::parse_config_str;
use risbench::materials::{material_from_table, CarrierConfig, IndexConvention, Material};
use risbench::numerics::{hankel1, CdfTable};
use risbench::propagation::{green2d, Point2D};
use risbench::ris::{calibrate_ris_normalization, normalized_optimal_gain, RisGeometry};
use risbench::room::room_channel;
use risbench::study::{ambient_cdf, equivalent_size_cdf, AmbientSeries, StudyConfig};
use risbench::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Geometry = 4,
    Numeric = 5,
    Calibration = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for RbComplex {
    fn from(z: Complex64) -> Self {
        RbComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbPoint {
    pub x: f64,
    pub z: f64,
}

impl From<RbPoint> for Point2D {
    fn from(p: RbPoint) -> Self {
        Point2D::new(p.x, p.z)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbSeries {
    Coherent = 0,
    PowerSum = 1,
}

impl From<RbSeries> for AmbientSeries {
    fn from(s: RbSeries) -> Self {
        match s {
            RbSeries::Coherent => AmbientSeries::Coherent,
            RbSeries::PowerSum => AmbientSeries::PowerSum,
        }
    }
}

/// Opaque wall material.
pub struct RbMaterial(Material);

/// Opaque study configuration.
pub struct RbStudy(StudyConfig);

/// Opaque empirical distribution.
pub struct RbCdf(CdfTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RbStatus {
    match e {
        Error::Config(_)
        | Error::UnknownMaterial(_)
        | Error::FrequencyOutOfRange { .. }
        | Error::MaterialTable(_)
        | Error::EmptyRegion => RbStatus::Config,
        Error::Geometry(_) | Error::LengthMismatch { .. } => RbStatus::Geometry,
        Error::Domain(_) | Error::UnsupportedOrder(_) | Error::Probability(_) | Error::Evanescent { .. } => {
            RbStatus::InvalidArgument
        }
        Error::Calibration { .. } => RbStatus::Calibration,
        _ => RbStatus::Numeric,
    }
}

struct Fail(RbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RbStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RbStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            RbStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn string(p: *const c_char, what: &str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Fail(RbStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Message of the last failure on this thread (empty if none). Owned by the
/// library.
#[no_mangle]
pub extern "C" fn rb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Hankel function of the first kind, order 0 or 1, at x > 0.
///
/// # Safety
/// `result` must be a valid pointer or null.
#[no_mangle]
pub unsafe extern "C" fn rb_hankel1(order: u32, x: f64, result: *mut RbComplex) -> RbStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = hankel1(order, x)?.into();
        Ok(())
    })
}

/// 2D Green's function between `r` and `s` at carrier `fc` (Hz).
///
/// # Safety
/// `result` must be a valid pointer or null.
#[no_mangle]
pub unsafe extern "C" fn rb_green2d(r: RbPoint, s: RbPoint, fc: f64, result: *mut RbComplex) -> RbStatus {
    guard(|| {
        let result = out(result, "result")?;
        let carrier = CarrierConfig::new(fc)?;
        *result = green2d(r.into(), s.into(), &carrier)?.into();
        Ok(())
    })
}

/// Material from the built-in ITU table. `sqrt_permittivity` selects
/// n = sqrt(eps_r) instead of using the tabulated value as the index.
///
/// # Safety
/// `name` must be a NUL-terminated string; `material` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_material_from_table(
    name: *const c_char,
    fc: f64,
    sqrt_permittivity: bool,
    material: *mut *mut RbMaterial,
) -> RbStatus {
    guard(|| {
        let material = out(material, "material")?;
        let name = string(name, "name")?;
        let convention = if sqrt_permittivity {
            IndexConvention::SqrtPermittivity
        } else {
            IndexConvention::ItuValueAsIndex
        };
        let m = material_from_table(&name, fc, convention)?;
        *material = Box::into_raw(Box::new(RbMaterial(m)));
        Ok(())
    })
}

/// Non-magnetic material with complex index `n`.
///
/// # Safety
/// `material` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_material_from_index(n: RbComplex, material: *mut *mut RbMaterial) -> RbStatus {
    guard(|| {
        let material = out(material, "material")?;
        let m = Material::from_index("custom", Complex64::new(n.re, n.im))?;
        *material = Box::into_raw(Box::new(RbMaterial(m)));
        Ok(())
    })
}

/// # Safety
/// `material` must come from an `rb_material_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_material_free(material: *mut RbMaterial) {
    if !material.is_null() {
        drop(Box::from_raw(material));
    }
}

/// Complex index of `material`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_material_index(material: *const RbMaterial, result: *mut RbComplex) -> RbStatus {
    guard(|| {
        *out(result, "result")? = handle(material, "material")?.0.n.into();
        Ok(())
    })
}

/// Plane-wave reflection coefficient at tangential wavenumber `kx` (rad/m).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_fresnel_spectrum(
    material: *const RbMaterial,
    fc: f64,
    kx: f64,
    result: *mut RbComplex,
) -> RbStatus {
    guard(|| {
        let result = out(result, "result")?;
        let m = handle(material, "material")?;
        let carrier = CarrierConfig::new(fc)?;
        *result = m.0.reflection(kx, &carrier)?.into();
        Ok(())
    })
}

/// Fitted surface normalization constant at carrier `fc`; fails with
/// `Calibration` beyond 5% from -mu0.
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_calibrate(fc: f64, result: *mut RbComplex) -> RbStatus {
    guard(|| {
        let result = out(result, "result")?;
        *result = calibrate_ris_normalization(&CarrierConfig::new(fc)?)?.into();
        Ok(())
    })
}

/// Study configuration from TOML text (same schema as the command line tool).
///
/// # Safety
/// `toml` must be a NUL-terminated string; `study` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_study_from_toml(toml: *const c_char, study: *mut *mut RbStudy) -> RbStatus {
    guard(|| {
        let study = out(study, "study")?;
        let text = string(toml, "toml")?;
        let config = parse_config_str(&text).map_err(|e| Fail(RbStatus::Config, e.to_string()))?;
        *study = Box::into_raw(Box::new(RbStudy(config)));
        Ok(())
    })
}

/// # Safety
/// `study` must come from `rb_study_from_toml`, or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_study_free(study: *mut RbStudy) {
    if !study.is_null() {
        drop(Box::from_raw(study));
    }
}

/// # Safety
/// `study` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn rb_study_set_seed(study: *mut RbStudy, seed: u64) -> RbStatus {
    guard(|| {
        out(study, "study")?.0.seed = seed;
        Ok(())
    })
}

/// Worker threads for the study (0 means the global pool). Results do not
/// depend on it.
///
/// # Safety
/// `study` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn rb_study_set_workers(study: *mut RbStudy, workers: u32) -> RbStatus {
    guard(|| {
        out(study, "study")?.0.workers = if workers == 0 { None } else { Some(workers as usize) };
        Ok(())
    })
}

/// Ambient channel of the configured room between `tx` and `rx`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_room_channel(
    study: *const RbStudy,
    rx: RbPoint,
    tx: RbPoint,
    h_coherent: *mut RbComplex,
    gain_power_sum: *mut f64,
) -> RbStatus {
    guard(|| {
        let c = &handle(study, "study")?.0;
        let h_out = out(h_coherent, "h_coherent")?;
        let p_out = out(gain_power_sum, "gain_power_sum")?;
        let sample = room_channel(rx.into(), tx.into(), &c.room, &c.material, &c.carrier, c.max_order)?;
        *h_out = sample.h_coherent.into();
        *p_out = sample.gain_power_sum;
        Ok(())
    })
}

/// Normalized optimal gain (linear) of a centered surface of `length` m
/// with the configured pitch.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_ris_optimal_gain(
    study: *const RbStudy,
    length: f64,
    rx: RbPoint,
    tx: RbPoint,
    gain: *mut f64,
) -> RbStatus {
    guard(|| {
        let c = &handle(study, "study")?.0;
        let gain = out(gain, "gain")?;
        let ris = RisGeometry::centered_at(length, c.pitch, c.ris_center_x)?;
        *gain = normalized_optimal_gain(rx.into(), tx.into(), &ris, &c.carrier)?;
        Ok(())
    })
}

fn pick<T>(items: Vec<(AmbientSeries, T)>, series: RbSeries) -> Result<T, Fail> {
    let want = AmbientSeries::from(series);
    items
        .into_iter()
        .find(|(s, _)| *s == want)
        .map(|(_, t)| t)
        .ok_or_else(|| Fail(RbStatus::Config, "series not enabled by the study's ambient_mode".into()))
}

/// Ambient gain distribution (dB) of one series.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_study_ambient_cdf(
    study: *const RbStudy,
    series: RbSeries,
    cdf: *mut *mut RbCdf,
) -> RbStatus {
    guard(|| {
        let c = &handle(study, "study")?.0;
        let cdf = out(cdf, "cdf")?;
        let table = pick(ambient_cdf(c)?, series)?;
        *cdf = Box::into_raw(Box::new(RbCdf(table)));
        Ok(())
    })
}

/// Equivalent surface size distribution (m) of one series; `saturated`
/// receives the number of samples censored at L = W.
///
/// # Safety
/// Pointers must be valid; `saturated` may be null.
#[no_mangle]
pub unsafe extern "C" fn rb_study_equivalent_size_cdf(
    study: *const RbStudy,
    series: RbSeries,
    cdf: *mut *mut RbCdf,
    saturated: *mut u64,
) -> RbStatus {
    guard(|| {
        let c = &handle(study, "study")?.0;
        let cdf = out(cdf, "cdf")?;
        let results = equivalent_size_cdf(c)?
            .into_iter()
            .map(|r| (r.series, (r.cdf, r.saturated)))
            .collect();
        let (table, sat) = pick(results, series)?;
        if let Some(s) = saturated.as_mut() {
            *s = sat as u64;
        }
        *cdf = Box::into_raw(Box::new(RbCdf(table)));
        Ok(())
    })
}

/// # Safety
/// `cdf` must come from an `rb_study_*_cdf` call, or be null.
#[no_mangle]
pub unsafe extern "C" fn rb_cdf_free(cdf: *mut RbCdf) {
    if !cdf.is_null() {
        drop(Box::from_raw(cdf));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `cdf` must be a valid handle or null.
#[no_mangle]
pub unsafe extern "C" fn rb_cdf_len(cdf: *const RbCdf) -> usize {
    cdf.as_ref().map_or(0, |c| c.0.len())
}

/// Smallest sample whose CDF reaches `p`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_cdf_quantile(cdf: *const RbCdf, p: f64, result: *mut f64) -> RbStatus {
    guard(|| {
        *out(result, "result")? = handle(cdf, "cdf")?.0.quantile(p)?;
        Ok(())
    })
}

/// Copies up to `capacity` sorted samples into `values`; `written` receives
/// the count.
///
/// # Safety
/// `values` must have room for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn rb_cdf_samples(
    cdf: *const RbCdf,
    values: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> RbStatus {
    guard(|| {
        let samples = handle(cdf, "cdf")?.0.samples();
        let written = out(written, "written")?;
        let n = samples.len().min(capacity);
        if n > 0 {
            if values.is_null() {
                return Err(null("values"));
            }
            ptr::copy_nonoverlapping(samples.as_ptr(), values, n);
        }
        *written = n;
        Ok(())
    })
}
