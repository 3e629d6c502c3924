//! Free-space wave primitives: the 2D Green's function, its normal derivative
//! on the z = 0 plane, incidence cosines and the spectral (plane-wave)
//! evaluation of one reflection off a material half-space.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{fresnel_spectrum, CarrierConfig, Material};
use crate::numerics::{adaptive_quad, hankel1, QuadOptions};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum separation, in wavelengths, accepted by the Green evaluations.
pub const MIN_SEPARATION_WAVELENGTHS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub z: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, z: 0.0 };

    pub const fn new(x: f64, z: f64) -> Self {
        Point2D { x, z }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self - other).norm()
    }

    /// Mirror image across the z = 0 plane.
    pub fn mirror_z(self) -> Point2D {
        Point2D::new(self.x, -self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.z.is_finite()
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, o: Point2D) -> Point2D {
        Point2D::new(self.x + o.x, self.z + o.z)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, o: Point2D) -> Point2D {
        Point2D::new(self.x - o.x, self.z - o.z)
    }
}

fn separation(a: Point2D, b: Point2D, carrier: &CarrierConfig) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Geometry("non-finite coordinates".into()));
    }
    let d = a.distance(b);
    if d < MIN_SEPARATION_WAVELENGTHS * carrier.wavelength() {
        return Err(Error::Geometry(format!(
            "points ({}, {}) and ({}, {}) are closer than the separation guard",
            a.x, a.z, b.x, b.z
        )));
    }
    Ok(d)
}

/// 2D Green's function (j/4) H0^(1)(k |r - s|).
pub fn green2d(r: Point2D, s: Point2D, carrier: &CarrierConfig) -> Result<Complex64> {
    let d = separation(r, s, carrier)?;
    Ok(0.25 * J * hankel1(0, carrier.wavenumber() * d)?)
}

/// Green's function from the distance alone (caller has validated it).
pub(crate) fn green_at_distance(d: f64, carrier: &CarrierConfig) -> Result<Complex64> {
    Ok(0.25 * J * hankel1(0, carrier.wavenumber() * d)?)
}

/// |s_z - u0_z| / |u0 - s|: cosine between the surface normal and the ray
/// from `u0` to `s`.
pub fn incidence_cosine(u0: Point2D, s: Point2D) -> Result<f64> {
    let d = u0.distance(s);
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Geometry("incidence cosine of coincident points".into()));
    }
    Ok(((s.z - u0.z).abs() / d).min(1.0))
}

/// Normal derivative of the Green's function with respect to the observation
/// point's z, evaluated on the plane z = 0:
/// (j pi / (2 lambda)) cos(theta_i) H1^(1)(k |u0 - s|).
pub fn green2d_normal_derivative(
    u0: Point2D,
    s: Point2D,
    carrier: &CarrierConfig,
) -> Result<Complex64> {
    if u0.z != 0.0 {
        return Err(Error::Geometry(format!("u0 must lie on z = 0, got z = {}", u0.z)));
    }
    if s.z == 0.0 {
        return Err(Error::Geometry("source on the z = 0 plane".into()));
    }
    let d = separation(u0, s, carrier)?;
    let cos_i = s.z.abs() / d;
    let lambda = carrier.wavelength();
    Ok(J * PI / (2.0 * lambda) * cos_i * hankel1(1, carrier.wavenumber() * d)?)
}

/// Reflection of the field radiated at `s` by the material half-space z < 0,
/// observed at `r`, evaluated as a plane-wave superposition restricted to the
/// propagating spectrum |k_x| <= k.
///
/// With k_x = k sin(phi) the integrand becomes smooth on [-pi/2, pi/2]:
/// (j / 4 pi) * int R(k sin phi) exp(j k (dx sin phi + Z cos phi)) dphi,
/// dx = r_x - s_x, Z = r_z + s_z.
pub fn weyl_reflected_field(
    r: Point2D,
    s: Point2D,
    material: &Material,
    carrier: &CarrierConfig,
) -> Result<Complex64> {
    if !(r.is_finite() && s.is_finite()) || r.z <= 0.0 || s.z <= 0.0 {
        return Err(Error::Geometry(
            "spectral reflection needs both points strictly above z = 0".into(),
        ));
    }
    let k = carrier.wavenumber();
    let dx = r.x - s.x;
    let zsum = r.z + s.z;
    let path = dx.hypot(zsum);
    // stationary-phase magnitude of the integral sets the error scale
    let scale = (2.0 * PI / (k * path)).sqrt();
    let rate = k * path;
    let initial = (PI / (0.5 * PI / rate)).ceil() as usize;
    let opts = QuadOptions::new(1e-9 * scale)
        .with_phase_rate(rate)
        .with_max_panels(4 * initial + 2000);
    let integral = adaptive_quad(
        |phi| {
            let (sp, cp) = phi.sin_cos();
            let refl = fresnel_spectrum((k * sp).clamp(-k, k), material, carrier)
                .unwrap_or(Complex64::new(-1.0, 0.0));
            refl * Complex64::new(0.0, k * (dx * sp + zsum * cp)).exp()
        },
        -0.5 * PI,
        0.5 * PI,
        opts,
    )?;
    Ok(J / (4.0 * PI) * integral)
}
