//! Reflecting surface in free space (direct path blocked): element channel
//! vectors, phase profiles, cophasing, the continuous near-field response, its
//! far-field closed form, and the normalization that puts surface responses on
//! the same scale as the image-lattice room channel.
//!
//! The surface lies on z = 0 along x. Responses carry the 1/mu0 scale of the
//! induced surface current; multiply by [`RIS_NORMALIZATION`] (or use the
//! `normalized_*` helpers) before comparing with [`crate::room`] channels.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::CarrierConfig;
use crate::numerics::{adaptive_quad, hankel1, hankel1_pair, sinc, QuadOptions};
use crate::propagation::{green2d, Point2D};

/// Permeability of free space, H/m.
pub const MU0: f64 = 4.0e-7 * PI;

/// Analytic normalization constant (-mu0) mapping surface responses onto the
/// unit-current scale of the room channel.
pub const RIS_NORMALIZATION: f64 = -MU0;

/// Surfaces shorter than this many wavelengths ignore edge diffraction at
/// their own risk.
pub const ELECTRICALLY_LARGE_WAVELENGTHS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisGeometry {
    length: f64,
    pitch: f64,
    center_x: f64,
    elements: Vec<Point2D>,
}

impl RisGeometry {
    /// Surface of length `length` centered on the origin with element pitch at
    /// most `pitch`.
    pub fn new(length: f64, pitch: f64) -> Result<Self> {
        RisGeometry::centered_at(length, pitch, 0.0)
    }

    pub fn centered_at(length: f64, pitch: f64, center_x: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Geometry(format!("surface length must be positive, got {length}")));
        }
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(Error::Geometry(format!("element pitch must be positive, got {pitch}")));
        }
        if !center_x.is_finite() {
            return Err(Error::Geometry("surface center must be finite".into()));
        }
        let n = element_count(length, pitch);
        let width = length / n as f64;
        let elements = (0..n)
            .map(|i| Point2D::new(center_x - 0.5 * length + (i as f64 + 0.5) * width, 0.0))
            .collect();
        Ok(RisGeometry {
            length,
            pitch,
            center_x,
            elements,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn center_x(&self) -> f64 {
        self.center_x
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Width of one element, L / N.
    pub fn element_width(&self) -> f64 {
        self.length / self.elements.len() as f64
    }

    pub fn elements(&self) -> &[Point2D] {
        &self.elements
    }

    /// True when edge diffraction, which this model omits, may matter.
    pub fn is_electrically_small(&self, carrier: &CarrierConfig) -> bool {
        self.length < ELECTRICALLY_LARGE_WAVELENGTHS * carrier.wavelength()
    }
}

/// Smallest element count whose width does not exceed `pitch`.
fn element_count(length: f64, pitch: f64) -> usize {
    let ratio = length / pitch;
    // exact multiples of the pitch must not gain an element from rounding
    ((ratio - 1e-9 * ratio.max(1.0)).ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    thetas: Vec<f64>,
}

fn wrap_phase(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl PhaseProfile {
    /// Profile from arbitrary angles, wrapped into [0, 2 pi).
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::Domain("phase shifts must be finite".into()));
        }
        Ok(PhaseProfile {
            thetas: thetas.into_iter().map(wrap_phase).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        PhaseProfile { thetas: vec![0.0; n] }
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Every phase shifted by `phi`.
    pub fn shifted(&self, phi: f64) -> Self {
        PhaseProfile {
            thetas: self.thetas.iter().map(|t| wrap_phase(t + phi)).collect(),
        }
    }

    /// Nearest-level rounding onto `2^bits` uniformly spaced phases.
    pub fn quantized(&self, bits: u32) -> Result<Self> {
        if bits == 0 || bits > 16 {
            return Err(Error::Domain(format!("phase resolution must be 1..=16 bits, got {bits}")));
        }
        let levels = (1u32 << bits) as f64;
        let step = TAU / levels;
        Ok(PhaseProfile {
            thetas: self
                .thetas
                .iter()
                .map(|t| wrap_phase((t / step).round() * step))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RisChannelVectors {
    /// Transmitter to each element.
    pub h_ts: Vec<Complex64>,
    /// Each element to the receiver, including the element width.
    pub h_sr: Vec<Complex64>,
}

fn check_side(p: Point2D, what: &str) -> Result<()> {
    if !(p.is_finite() && p.z > 0.0) {
        return Err(Error::Geometry(format!(
            "{what} ({}, {}) must lie strictly above the surface plane",
            p.x, p.z
        )));
    }
    Ok(())
}

/// Transmitter-side prefactor -pi / (4 mu0 lambda).
fn ts_prefactor(carrier: &CarrierConfig) -> f64 {
    -PI / (4.0 * MU0 * carrier.wavelength())
}

/// Per-element channels between `s`, the surface and `r`.
pub fn ris_channel_vectors(
    r: Point2D,
    s: Point2D,
    ris: &RisGeometry,
    carrier: &CarrierConfig,
) -> Result<RisChannelVectors> {
    check_side(s, "transmitter")?;
    check_side(r, "receiver")?;
    let k = carrier.wavenumber();
    let pre = ts_prefactor(carrier);
    let width = ris.element_width();
    let mut h_ts = Vec::with_capacity(ris.len());
    let mut h_sr = Vec::with_capacity(ris.len());
    for &u in ris.elements() {
        let d_s = u.distance(s);
        let d_r = u.distance(r);
        let cos_i = s.z / d_s;
        h_ts.push(pre * cos_i * hankel1(1, k * d_s)?);
        h_sr.push(width * hankel1(0, k * d_r)?);
    }
    Ok(RisChannelVectors { h_ts, h_sr })
}

/// h = h_sr^T diag(exp(j theta)) h_ts.
pub fn ris_channel(
    r: Point2D,
    s: Point2D,
    ris: &RisGeometry,
    phases: &PhaseProfile,
    carrier: &CarrierConfig,
) -> Result<Complex64> {
    if phases.len() != ris.len() {
        return Err(Error::LengthMismatch {
            expected: ris.len(),
            got: phases.len(),
        });
    }
    let v = ris_channel_vectors(r, s, ris, carrier)?;
    Ok(combine(&v, phases))
}

/// Applies a phase profile to precomputed channel vectors.
pub fn combine(v: &RisChannelVectors, phases: &PhaseProfile) -> Complex64 {
    v.h_sr
        .iter()
        .zip(&v.h_ts)
        .zip(phases.thetas())
        .map(|((a, b), &t)| a * b * Complex64::from_polar(1.0, t))
        .sum()
}

/// Cophased profile theta_n = -(arg h_sr,n + arg h_ts,n) and the power it
/// attains, (sum_n |h_sr,n| |h_ts,n|)^2.
pub fn optimal_from_vectors(v: &RisChannelVectors) -> (f64, PhaseProfile) {
    let mut amplitude = 0.0;
    let mut thetas = Vec::with_capacity(v.h_ts.len());
    for (a, b) in v.h_sr.iter().zip(&v.h_ts) {
        amplitude += a.norm() * b.norm();
        thetas.push(-(a.arg() + b.arg()));
    }
    let phases = PhaseProfile::new(thetas).expect("finite phases");
    (amplitude * amplitude, phases)
}

/// Best power reachable by phase control alone, with the profile attaining it.
pub fn ris_optimal_gain(
    r: Point2D,
    s: Point2D,
    ris: &RisGeometry,
    carrier: &CarrierConfig,
) -> Result<(f64, PhaseProfile)> {
    let v = ris_channel_vectors(r, s, ris, carrier)?;
    Ok(optimal_from_vectors(&v))
}

/// (|h_sr| |h_ts|)^2, the Cauchy-Schwarz bound on any profile's power. It is
/// reached by phases alone only when the two magnitude profiles are
/// proportional.
pub fn cauchy_schwarz_bound(v: &RisChannelVectors) -> f64 {
    let a: f64 = v.h_sr.iter().map(|z| z.norm_sqr()).sum();
    let b: f64 = v.h_ts.iter().map(|z| z.norm_sqr()).sum();
    a * b
}

/// Optimal power rescaled by `RIS_NORMALIZATION`, comparable to room gains.
///
/// Only element magnitudes matter, so this skips building the phase profile.
pub fn normalized_optimal_gain(
    r: Point2D,
    s: Point2D,
    ris: &RisGeometry,
    carrier: &CarrierConfig,
) -> Result<f64> {
    check_side(s, "transmitter")?;
    check_side(r, "receiver")?;
    let k = carrier.wavenumber();
    // |kappa * pre| = pi / (4 lambda)
    let pre = (RIS_NORMALIZATION * ts_prefactor(carrier)).abs();
    let width = ris.element_width();
    let mut amplitude = 0.0;
    for &u in ris.elements() {
        let d_s = u.distance(s);
        let d_r = u.distance(r);
        let ts = pre * (s.z / d_s) * hankel1(1, k * d_s)?.norm();
        let sr = width * hankel1(0, k * d_r)?.norm();
        amplitude += ts * sr;
    }
    Ok(amplitude * amplitude)
}

/// Continuous near-field response of a surface of length `length` centered on
/// the origin with phase profile `theta`, integrated adaptively.
///
/// `tol` is relative to the integral of the integrand's magnitude.
pub fn ris_near_field_integral<F>(
    r: Point2D,
    s: Point2D,
    length: f64,
    theta: F,
    carrier: &CarrierConfig,
    tol: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    ris_near_field_integral_over(r, s, -0.5 * length, 0.5 * length, theta, carrier, tol)
}

/// Near-field response of the aperture segment `[x_lo, x_hi]` on z = 0.
pub fn ris_near_field_integral_over<F>(
    r: Point2D,
    s: Point2D,
    x_lo: f64,
    x_hi: f64,
    theta: F,
    carrier: &CarrierConfig,
    tol: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
{
    check_side(s, "transmitter")?;
    check_side(r, "receiver")?;
    if !(x_lo < x_hi) {
        return Err(Error::Geometry(format!("empty aperture [{x_lo}, {x_hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let k = carrier.wavenumber();
    let integrand = |ux: f64| -> Complex64 {
        let u = Point2D::new(ux, 0.0);
        let d_s = u.distance(s);
        let d_r = u.distance(r);
        let (h0, _) = hankel1_pair(k * d_r).unwrap_or_default();
        let (_, h1) = hankel1_pair(k * d_s).unwrap_or_default();
        h0 * (s.z / d_s) * h1 * Complex64::from_polar(1.0, theta(ux))
    };
    // coarse magnitude scan fixes the absolute error target
    let probes = 64;
    let step = (x_hi - x_lo) / probes as f64;
    let magnitude: f64 = (0..probes)
        .map(|i| integrand(x_lo + (i as f64 + 0.5) * step).norm() * step)
        .sum();
    let abs_tol = (tol * magnitude).max(f64::MIN_POSITIVE);
    // path-length derivative is at most 2 per unit of aperture
    let rate = 2.0 * k;
    let initial = ((x_hi - x_lo) / (0.5 * PI / rate)).ceil() as usize;
    let opts = QuadOptions::new(abs_tol)
        .with_phase_rate(rate)
        .with_max_panels(4 * initial + 4000);
    let integral = adaptive_quad(integrand, x_lo, x_hi, opts)?;
    Ok(ts_prefactor(carrier) * integral)
}

/// Incidence angle sine of `s` seen from the origin, s_x / |s|.
pub fn sin_incidence(s: Point2D) -> f64 {
    s.x / s.norm()
}

/// Reflection angle sine of `r`, signed so that the specular direction of
/// `s` has the same value: -r_x / |r|.
pub fn sin_reflection(r: Point2D) -> f64 {
    -r.x / r.norm()
}

/// Incident field amplitude at the surface center (lambda / 2 mu0) e^{jk|s|} / sqrt(2 pi |s|).
pub fn incident_amplitude(s: Point2D, carrier: &CarrierConfig) -> Complex64 {
    let dist = s.norm();
    carrier.wavelength() / (2.0 * MU0) * Complex64::from_polar(1.0, carrier.wavenumber() * dist)
        / (2.0 * PI * dist).sqrt()
}

/// Far-field response of an unphased surface of length `length`.
pub fn ris_far_field(r: Point2D, s: Point2D, length: f64, carrier: &CarrierConfig) -> Result<Complex64> {
    check_side(s, "transmitter")?;
    check_side(r, "receiver")?;
    let lambda = carrier.wavelength();
    let rn = r.norm();
    let cos_i = s.z / s.norm();
    let aperture = length / lambda;
    let spread = Complex64::from_polar(1.0, carrier.wavenumber() * rn) / (2.0 * PI * rn).sqrt();
    Ok(incident_amplitude(s, carrier)
        * cos_i
        * spread
        * aperture
        * sinc(aperture * (sin_incidence(s) - sin_reflection(r))))
}

/// Far-field power gain, written out as the closed-form product.
pub fn far_field_gain(r: Point2D, s: Point2D, length: f64, carrier: &CarrierConfig) -> Result<f64> {
    check_side(s, "transmitter")?;
    check_side(r, "receiver")?;
    let lambda = carrier.wavelength();
    let e2 = incident_amplitude(s, carrier).norm_sqr();
    let cos_i = s.z / s.norm();
    let aperture = length / lambda;
    let sc = sinc(aperture * (sin_incidence(s) - sin_reflection(r)));
    Ok(e2 / (2.0 * PI * r.norm()) * cos_i * cos_i * aperture * aperture * sc * sc)
}

/// Specular reference geometry used to fit the normalization constant, in
/// wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationGeometry {
    pub length: f64,
    pub tx: Point2D,
    pub rx: Point2D,
}

impl CalibrationGeometry {
    /// L = 80, s = (-10, 20), r = (10, 20) wavelengths.
    pub const REFERENCE: CalibrationGeometry = CalibrationGeometry {
        length: 80.0,
        tx: Point2D::new(-10.0, 20.0),
        rx: Point2D::new(10.0, 20.0),
    };

    /// Whether the receiver sits on the specular ray of the transmitter.
    pub fn is_specular(&self) -> bool {
        (sin_incidence(self.tx) - sin_reflection(self.rx)).abs() < 1e-12
    }
}

/// Fitted constant kappa with kappa * h_L = -G(r, mirror(s)) for a large
/// unphased plate, at `geometry` (coordinates in wavelengths).
pub fn fit_ris_normalization(carrier: &CarrierConfig, geometry: &CalibrationGeometry) -> Result<Complex64> {
    let lambda = carrier.wavelength();
    let scale = |p: Point2D| Point2D::new(p.x * lambda, p.z * lambda);
    let (s, r) = (scale(geometry.tx), scale(geometry.rx));
    let h = ris_near_field_integral(r, s, geometry.length * lambda, |_| 0.0, carrier, 1e-9)?;
    let image = -green2d(r, s.mirror_z(), carrier)?;
    if h.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(image / h)
}

/// Relative deviation |kappa / (-mu0) - 1|.
pub fn normalization_deviation(kappa: Complex64) -> f64 {
    (kappa / RIS_NORMALIZATION - 1.0).norm()
}

/// Fits kappa at the reference geometry and fails if it strays more than 5%
/// from -mu0.
pub fn calibrate_ris_normalization(carrier: &CarrierConfig) -> Result<Complex64> {
    let kappa = fit_ris_normalization(carrier, &CalibrationGeometry::REFERENCE)?;
    let deviation = normalization_deviation(kappa);
    if deviation > 0.05 {
        return Err(Error::Calibration { kappa, deviation });
    }
    Ok(kappa)
}

/// Phase that cophases the continuous integrand at `u_x`; used for
/// continuous-aperture checks of the discrete optimum.
pub fn cophasing_phase(ux: f64, r: Point2D, s: Point2D, carrier: &CarrierConfig) -> f64 {
    let k = carrier.wavenumber();
    let u = Point2D::new(ux, 0.0);
    let h0 = hankel1(0, k * u.distance(r)).unwrap_or_default();
    let h1 = hankel1(1, k * u.distance(s)).unwrap_or_default();
    -((h0 * h1).arg())
}
