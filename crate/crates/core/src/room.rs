//! Ambient channel of an empty rectangular room via the image lattice.
//!
//! The room spans x in [-W/2, W/2] and z in [0, beta W]. Walls normal to z
//! (W1 at z = 0, W3 at z = beta W) and walls normal to x (W2, W4 at
//! x = +-W/2) each reflect with the material's plane-wave coefficient taken at
//! the specular angle of the image ray. The direct path is never included.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{fresnel_spectrum, CarrierConfig, Material};
use crate::propagation::{green_at_distance, Point2D, MIN_SEPARATION_WAVELENGTHS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomGeometry {
    width: f64,
    beta: f64,
}

impl RoomGeometry {
    pub fn new(width: f64, beta: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Geometry(format!("room width must be positive, got {width}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Geometry(format!("aspect parameter beta must lie in (0, 1], got {beta}")));
        }
        Ok(RoomGeometry { width, beta })
    }

    /// Longer dimension W (along x).
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Shorter dimension beta W (along z).
    pub fn depth(&self) -> f64 {
        self.beta * self.width
    }

    /// Whether `p` lies at least `margin` inside every wall.
    pub fn contains(&self, p: Point2D, margin: f64) -> bool {
        let half = 0.5 * self.width;
        p.is_finite()
            && p.x > -half + margin
            && p.x < half - margin
            && p.z > margin
            && p.z < self.depth() - margin
    }

    /// Room scaled by `factor` (same aspect).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        RoomGeometry::new(self.width * factor, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageSource {
    pub position: Point2D,
    /// Bounces on the x-normal walls (W2, W4).
    pub nx: u32,
    /// Bounces on the z-normal walls (W1, W3).
    pub nz: u32,
    pub order: u32,
}

/// Images of a one-dimensional source coordinate `s` between walls at `lo`
/// and `lo + span`, with their bounce counts, up to `max_bounces`.
fn images_1d(s: f64, lo: f64, span: f64, max_bounces: u32) -> Vec<(f64, u32)> {
    // shift so the walls sit at 0 and span
    let t = s - lo;
    let period = 2.0 * span;
    let reach = max_bounces as i64 / 2 + 1;
    let mut out = Vec::new();
    for q in -reach..=reach {
        // translated copies: 2q L + t, bounced 2|q| times
        let even = 2 * q.unsigned_abs() as u32;
        if even <= max_bounces {
            out.push((lo + q as f64 * period + t, even));
        }
        // mirrored copies: 2q L - t, bounced |2q - 1| times
        let odd = (2 * q - 1).unsigned_abs() as u32;
        if odd <= max_bounces {
            out.push((lo + q as f64 * period - t, odd));
        }
    }
    out
}

/// All images with 1 <= order <= `max_order`, sorted by order then position.
pub fn enumerate_images(room: &RoomGeometry, s: Point2D, max_order: u32) -> Result<Vec<ImageSource>> {
    if max_order < 1 {
        return Err(Error::Geometry("truncation order must be at least 1".into()));
    }
    if !room.contains(s, 0.0) {
        return Err(Error::Geometry(format!(
            "source ({}, {}) is not strictly inside the room",
            s.x, s.z
        )));
    }
    let xs = images_1d(s.x, -0.5 * room.width, room.width, max_order);
    let zs = images_1d(s.z, 0.0, room.depth(), max_order);
    let mut out = Vec::with_capacity((2 * max_order * (max_order + 1)) as usize);
    for &(x, nx) in &xs {
        for &(z, nz) in &zs {
            let order = nx + nz;
            if order >= 1 && order <= max_order {
                out.push(ImageSource {
                    position: Point2D::new(x, z),
                    nx,
                    nz,
                    order,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.order
            .cmp(&b.order)
            .then(a.position.x.total_cmp(&b.position.x))
            .then(a.position.z.total_cmp(&b.position.z))
    });
    Ok(out)
}

/// Contribution of one image at receiver `r`: the Green's function from the
/// image times the specular reflection coefficient of every bounce.
pub fn image_contribution(
    img: &ImageSource,
    r: Point2D,
    material: &Material,
    carrier: &CarrierConfig,
) -> Result<Complex64> {
    let delta = r - img.position;
    let d = delta.norm();
    if !(d >= MIN_SEPARATION_WAVELENGTHS * carrier.wavelength()) {
        return Err(Error::Geometry("receiver coincides with an image".into()));
    }
    let k = carrier.wavenumber();
    let mut coeff = Complex64::new(1.0, 0.0);
    if img.nx > 0 {
        // x-normal walls: tangential direction is z
        let kt = (k * delta.z.abs() / d).min(k);
        coeff *= fresnel_spectrum(kt, material, carrier)?.powu(img.nx);
    }
    if img.nz > 0 {
        let kt = (k * delta.x.abs() / d).min(k);
        coeff *= fresnel_spectrum(kt, material, carrier)?.powu(img.nz);
    }
    Ok(green_at_distance(d, carrier)? * coeff)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSample {
    pub tx: Point2D,
    pub rx: Point2D,
    /// Coherent sum of all image contributions.
    pub h_coherent: Complex64,
    /// Sum of the contributions' squared magnitudes (linear).
    pub gain_power_sum: f64,
    /// Truncation order.
    pub max_order: u32,
}

impl ChannelSample {
    pub fn gain_coherent(&self) -> f64 {
        self.h_coherent.norm_sqr()
    }
}

/// Truncated ambient channel between `s` (transmitter) and `r` (receiver).
pub fn room_channel(
    r: Point2D,
    s: Point2D,
    room: &RoomGeometry,
    material: &Material,
    carrier: &CarrierConfig,
    max_order: u32,
) -> Result<ChannelSample> {
    if !room.contains(r, 0.0) {
        return Err(Error::Geometry(format!(
            "receiver ({}, {}) is not strictly inside the room",
            r.x, r.z
        )));
    }
    if r.distance(s) < carrier.wavelength() {
        return Err(Error::Geometry(
            "transmitter and receiver must be at least one wavelength apart".into(),
        ));
    }
    let images = enumerate_images(room, s, max_order)?;
    let mut h = Complex64::new(0.0, 0.0);
    let mut power = 0.0;
    for img in &images {
        let c = image_contribution(img, r, material, carrier)?;
        h += c;
        power += c.norm_sqr();
    }
    Ok(ChannelSample {
        tx: s,
        rx: r,
        h_coherent: h,
        gain_power_sum: power,
        max_order,
    })
}

/// Per-image contributions, in the order of [`enumerate_images`].
pub fn image_contributions(
    r: Point2D,
    s: Point2D,
    room: &RoomGeometry,
    material: &Material,
    carrier: &CarrierConfig,
    max_order: u32,
) -> Result<Vec<(ImageSource, Complex64)>> {
    enumerate_images(room, s, max_order)?
        .into_iter()
        .map(|img| Ok((img, image_contribution(&img, r, material, carrier)?)))
        .collect()
}
