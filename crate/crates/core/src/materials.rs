//! Wall materials and their plane-wave (transverse-electric) reflection
//! response.
//!
//! Time dependence is `exp(-j w t)` throughout, paired with the outgoing
//! Hankel function `H^(1)`. Lossy materials carry `Im(n) <= 0`; every square
//! root below is the principal branch (nonnegative real part).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_quad, QuadOptions};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const MATERIAL_TABLE: &str = include_str!("../data/materials.txt");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierConfig {
    fc: f64,
    lambda_c: f64,
}

impl CarrierConfig {
    pub fn new(fc: f64) -> Result<Self> {
        if !(fc.is_finite() && fc > 0.0) {
            return Err(Error::Domain(format!("carrier frequency must be positive, got {fc}")));
        }
        Ok(CarrierConfig {
            fc,
            lambda_c: SPEED_OF_LIGHT / fc,
        })
    }

    /// Carrier frequency in Hz.
    pub fn fc(&self) -> f64 {
        self.fc
    }

    /// Carrier wavelength in m.
    pub fn wavelength(&self) -> f64 {
        self.lambda_c
    }

    /// Free-space wavenumber 2 pi / lambda_c in rad/m.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.lambda_c
    }
}

impl Default for CarrierConfig {
    fn default() -> Self {
        CarrierConfig::new(28e9).expect("28 GHz is a valid carrier")
    }
}

/// How the index fed to the reflection response is derived from the ITU
/// complex permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexConvention {
    /// The ITU complex value is used directly as the index `n` (for concrete at
    /// 28 GHz this gives n = 5.31 - j0.3106). Default.
    #[default]
    ItuValueAsIndex,
    /// Textbook relation n = sqrt(eps_r mu_r) with eps_r the ITU value.
    SqrtPermittivity,
}

impl FromStr for IndexConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "itu-value-as-index" => Ok(IndexConvention::ItuValueAsIndex),
            "sqrt-permittivity" => Ok(IndexConvention::SqrtPermittivity),
            other => Err(Error::Config(format!(
                "unknown index convention `{other}` (expected itu-value-as-index or sqrt-permittivity)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaterialKind {
    Concrete,
    Plasterboard,
    Custom,
}

impl FromStr for MaterialKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "concrete" => Ok(MaterialKind::Concrete),
            "plasterboard" => Ok(MaterialKind::Plasterboard),
            "custom" => Ok(MaterialKind::Custom),
            _ => Err(Error::UnknownMaterial(s.to_string())),
        }
    }
}

impl fmt::Display for MaterialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaterialKind::Concrete => "concrete",
            MaterialKind::Plasterboard => "plasterboard",
            MaterialKind::Custom => "custom",
        })
    }
}

/// One row of the embedded ITU power-law table.
#[derive(Debug, Clone, PartialEq)]
pub struct ItuEntry {
    pub name: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f_min_ghz: f64,
    pub f_max_ghz: f64,
}

impl ItuEntry {
    /// Complex relative permittivity at `fc_ghz`.
    pub fn permittivity(&self, fc_ghz: f64) -> Complex64 {
        let eps_real = self.a * fc_ghz.powf(self.b);
        let sigma = self.c * fc_ghz.powf(self.d);
        Complex64::new(eps_real, -17.98 * sigma / fc_ghz)
    }
}

fn parse_table(text: &str) -> Result<Vec<ItuEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 7 {
            return Err(Error::MaterialTable(format!(
                "line {}: expected 7 columns, found {}",
                lineno + 1,
                cols.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            cols[i].parse::<f64>().map_err(|e| {
                Error::MaterialTable(format!("line {}: column {}: {e}", lineno + 1, i + 1))
            })
        };
        out.push(ItuEntry {
            name: cols[0].to_string(),
            a: num(1)?,
            b: num(2)?,
            c: num(3)?,
            d: num(4)?,
            f_min_ghz: num(5)?,
            f_max_ghz: num(6)?,
        });
    }
    Ok(out)
}

/// The embedded material table.
pub fn itu_table() -> Vec<ItuEntry> {
    parse_table(MATERIAL_TABLE).expect("embedded material table is well formed")
}

/// Looks up a table row by name.
pub fn itu_entry(name: &str) -> Result<ItuEntry> {
    itu_table()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    pub eps_r: Complex64,
    pub mu_r: Complex64,
    pub n: Complex64,
}

impl Material {
    /// Material from its relative constitutive parameters.
    pub fn from_constitutive(name: &str, eps_r: Complex64, mu_r: Complex64) -> Result<Self> {
        let n = (eps_r * mu_r).sqrt();
        if !(n.re.is_finite() && n.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite index for `{name}`")));
        }
        Ok(Material {
            name: name.to_string(),
            eps_r,
            mu_r,
            n,
        })
    }

    /// Non-magnetic material with the given index; eps_r = n^2.
    pub fn from_index(name: &str, n: Complex64) -> Result<Self> {
        if !(n.re.is_finite() && n.im.is_finite()) || n.re < 0.0 {
            return Err(Error::Domain(format!("index must be finite with Re(n) >= 0, got {n}")));
        }
        Ok(Material {
            name: name.to_string(),
            eps_r: n * n,
            mu_r: Complex64::new(1.0, 0.0),
            n,
        })
    }

    /// Very large index standing in for a perfect electric conductor.
    pub fn pec_surrogate() -> Self {
        Material::from_index("pec", Complex64::new(1e6, 0.0)).expect("finite index")
    }

    pub fn free_space() -> Self {
        Material::from_index("vacuum", Complex64::new(1.0, 0.0)).expect("finite index")
    }

    /// Plane-wave reflection coefficient at tangential wavenumber `kx`.
    pub fn reflection(&self, kx: f64, carrier: &CarrierConfig) -> Result<Complex64> {
        fresnel_spectrum(kx, self, carrier)
    }
}

/// Material at carrier `fc` (Hz) from the embedded ITU power-law table.
///
/// `custom` has no table row; use [`Material::from_constitutive`] for it.
pub fn material_from_itu(
    kind: MaterialKind,
    fc: f64,
    convention: IndexConvention,
) -> Result<Material> {
    if kind == MaterialKind::Custom {
        return Err(Error::Config(
            "custom materials take eps_r and mu_r directly, not ITU constants".into(),
        ));
    }
    material_from_table(&kind.to_string(), fc, convention)
}

/// Like [`material_from_itu`] but accepts any row name of the table.
pub fn material_from_table(name: &str, fc: f64, convention: IndexConvention) -> Result<Material> {
    let entry = itu_entry(name)?;
    let fc_ghz = fc / 1e9;
    if !(fc_ghz.is_finite() && fc_ghz >= entry.f_min_ghz && fc_ghz <= entry.f_max_ghz) {
        return Err(Error::FrequencyOutOfRange {
            fc_ghz,
            min_ghz: entry.f_min_ghz,
            max_ghz: entry.f_max_ghz,
        });
    }
    let eps = entry.permittivity(fc_ghz);
    match convention {
        IndexConvention::ItuValueAsIndex => Material::from_index(&entry.name, eps),
        IndexConvention::SqrtPermittivity => {
            Material::from_constitutive(&entry.name, eps, Complex64::new(1.0, 0.0))
        }
    }
}

/// Transverse-electric reflection coefficient of a material half-space versus
/// the tangential wavenumber `kx` (propagating spectrum only).
pub fn fresnel_spectrum(kx: f64, material: &Material, carrier: &CarrierConfig) -> Result<Complex64> {
    let k = carrier.wavenumber();
    if !kx.is_finite() || kx.abs() > k * (1.0 + 1e-12) {
        return Err(Error::Evanescent { kx, k });
    }
    let s = (kx / k).powi(2).min(1.0);
    let cos_i = Complex64::new((1.0 - s).sqrt(), 0.0);
    let a = material.mu_r * cos_i;
    let b = (material.n * material.n - s).sqrt();
    let den = a + b;
    if den.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok((a - b) / den)
}

/// Uniform sampling grid `start + i * step`, `i < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl UniformGrid {
    /// Symmetric grid over `[-half_width, half_width]` with the given step.
    pub fn symmetric(half_width: f64, step: f64) -> Self {
        let n = (half_width / step).round() as usize;
        UniformGrid {
            start: -(n as f64) * step,
            step,
            count: 2 * n + 1,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.start + self.step * i as f64)
    }
}

/// Spatial reflection response: the inverse Fourier transform of the
/// propagating part of [`fresnel_spectrum`], sampled on `grid`.
pub fn spatial_response(
    material: &Material,
    carrier: &CarrierConfig,
    grid: &UniformGrid,
) -> Result<Vec<Complex64>> {
    let lambda = carrier.wavelength();
    if !(grid.step > 0.0 && grid.step < lambda / 4.0) {
        return Err(Error::Domain(format!(
            "grid step {} must lie in (0, lambda/4 = {})",
            grid.step,
            lambda / 4.0
        )));
    }
    let k = carrier.wavenumber();
    grid.points()
        .map(|u| {
            let opts = QuadOptions::new(1e-9 * k).with_phase_rate(u.abs().max(1.0 / k));
            let integral = adaptive_quad(
                |kx| {
                    let r = fresnel_spectrum(kx, material, carrier)
                        .unwrap_or(Complex64::new(0.0, 0.0));
                    r * Complex64::new(0.0, kx * u).exp()
                },
                -k,
                k,
                opts,
            )?;
            Ok(integral / (2.0 * PI))
        })
        .collect()
}
