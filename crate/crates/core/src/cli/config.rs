//! TOML study configuration.
//!
//! ```toml
//! [carrier]
//! fc = 28e9                 # Hz, default 28 GHz
//!
//! [room]
//! width = 10.0              # W in m, required
//! beta = 1.0                # depth / width, in (0, 1], default 1
//!
//! [material]
//! name = "concrete"         # table row, or "custom"
//! convention = "itu-value-as-index"   # or "sqrt-permittivity"
//! # custom only: index = [re, im], or eps_r = [re, im] and mu_r = [re, im]
//!
//! [ris]
//! sizes = [0.25, 0.5, 1.0]  # m, each <= W
//! pitch = 0.0053            # m, default lambda/2
//! center_x = 0.0            # m
//! phase_bits = 2            # optional quantization
//!
//! [study]
//! samples = 2000            # required
//! seed = 1                  # default 0
//! max_order = 3             # default 3
//! ambient_mode = "both"     # coherent | power_sum | both
//! wall_standoff = 0.0107    # m, default lambda
//! ```

use std::fmt;
use std::ops::Range;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use crate::error::Error;
use crate::materials::{material_from_table, CarrierConfig, IndexConvention, Material};
use crate::room::RoomGeometry;
use crate::study::{AmbientMode, StudyConfig};

/// Configuration problem, with the 1-based line it refers to when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    carrier: RawCarrier,
    room: Spanned<RawRoom>,
    material: Spanned<RawMaterial>,
    #[serde(default)]
    ris: RawRis,
    study: Spanned<RawStudy>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCarrier {
    fc: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoom {
    width: Spanned<f64>,
    beta: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    name: Spanned<String>,
    convention: Option<Spanned<String>>,
    index: Option<Spanned<[f64; 2]>>,
    eps_r: Option<Spanned<[f64; 2]>>,
    mu_r: Option<Spanned<[f64; 2]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRis {
    sizes: Option<Spanned<Vec<f64>>>,
    pitch: Option<Spanned<f64>>,
    center_x: Option<Spanned<f64>>,
    phase_bits: Option<Spanned<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    samples: Spanned<i64>,
    seed: Option<Spanned<u64>>,
    max_order: Option<Spanned<i64>>,
    ambient_mode: Option<Spanned<String>>,
    wall_standoff: Option<Spanned<f64>>,
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line_of(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn err<T>(&self, span: Range<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError {
            line: Some(self.line_of(span)),
            message: message.into(),
        })
    }

    fn wrap<T>(&self, span: Range<usize>, r: crate::Result<T>) -> Result<T, ConfigError> {
        r.or_else(|e: Error| self.err(span, e.to_string()))
    }
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<StudyConfig, ConfigError> {
    let src = Source { text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
        line: e.span().map(|s| src.line_of(s)),
        message: e.message().to_string(),
    })?;

    let carrier = match &raw.carrier.fc {
        Some(fc) => src.wrap(fc.span(), CarrierConfig::new(*fc.get_ref()))?,
        None => CarrierConfig::default(),
    };
    let lambda = carrier.wavelength();

    let room_raw = raw.room.get_ref();
    let beta_span = room_raw.beta.as_ref().map_or(raw.room.span(), |b| b.span());
    let width = *room_raw.width.get_ref();
    let beta = room_raw.beta.as_ref().map_or(1.0, |b| *b.get_ref());
    if !(width.is_finite() && width > 0.0) {
        return src.err(room_raw.width.span(), format!("room width must be positive, got {width}"));
    }
    let room = src.wrap(beta_span, RoomGeometry::new(width, beta))?;

    let material = parse_material(&src, &raw.material, &carrier)?;

    let study_raw = raw.study.get_ref();
    let samples = *study_raw.samples.get_ref();
    if samples < 1 {
        return src.err(study_raw.samples.span(), format!("samples must be at least 1, got {samples}"));
    }
    let mut config = StudyConfig::new(room, material, carrier, samples as usize);
    if let Some(seed) = &study_raw.seed {
        config.seed = *seed.get_ref();
    }
    if let Some(m) = &study_raw.max_order {
        let m_val = *m.get_ref();
        if !(1..=64).contains(&m_val) {
            return src.err(m.span(), format!("max_order must lie in 1..=64, got {m_val}"));
        }
        config.max_order = m_val as u32;
    }
    if let Some(mode) = &study_raw.ambient_mode {
        config.ambient_mode = src.wrap(mode.span(), mode.get_ref().parse::<AmbientMode>())?;
    }
    if let Some(m) = &study_raw.wall_standoff {
        let v = *m.get_ref();
        if !(v.is_finite() && v >= 0.0) {
            return src.err(m.span(), format!("wall_standoff must be nonnegative, got {v}"));
        }
        config.wall_standoff = v;
    }

    let ris = &raw.ris;
    if let Some(p) = &ris.pitch {
        let v = *p.get_ref();
        if !(v.is_finite() && v > 0.0) {
            return src.err(p.span(), format!("pitch must be positive, got {v}"));
        }
        config.pitch = v;
    } else {
        config.pitch = 0.5 * lambda;
    }
    if let Some(c) = &ris.center_x {
        let v = *c.get_ref();
        if !(v.is_finite() && v.abs() <= 0.5 * width) {
            return src.err(c.span(), format!("center_x = {v} m lies outside the wall [-W/2, W/2]"));
        }
        config.ris_center_x = v;
    }
    if let Some(b) = &ris.phase_bits {
        let v = *b.get_ref();
        if !(1..=16).contains(&v) {
            return src.err(b.span(), format!("phase_bits must lie in 1..=16, got {v}"));
        }
        config.phase_bits = Some(v);
    }
    if let Some(sizes) = &ris.sizes {
        for &l in sizes.get_ref() {
            if !(l.is_finite() && l > 0.0 && l <= width) {
                return src.err(
                    sizes.span(),
                    format!("surface size {l} m must lie in (0, W = {width} m]"),
                );
            }
        }
        config.ris_sizes = sizes.get_ref().clone();
    }

    // remaining cross-field checks (empty placement region and the like)
    config.validate().map_err(|e| ConfigError {
        line: None,
        message: e.to_string(),
    })?;
    Ok(config)
}

fn parse_material(
    src: &Source<'_>,
    raw: &Spanned<RawMaterial>,
    carrier: &CarrierConfig,
) -> Result<Material, ConfigError> {
    let m = raw.get_ref();
    let name = m.name.get_ref();
    let convention = match &m.convention {
        Some(c) => src.wrap(c.span(), c.get_ref().parse::<IndexConvention>())?,
        None => IndexConvention::default(),
    };
    if name.eq_ignore_ascii_case("custom") {
        return match (&m.index, &m.eps_r, &m.mu_r) {
            (Some(n), None, None) => src.wrap(n.span(), Material::from_index("custom", complex(*n.get_ref()))),
            (None, Some(eps), mu) => {
                let mu_val = mu.as_ref().map_or(Complex64::new(1.0, 0.0), |m| complex(*m.get_ref()));
                src.wrap(eps.span(), Material::from_constitutive("custom", complex(*eps.get_ref()), mu_val))
            }
            _ => src.err(
                raw.span(),
                "custom material needs either `index` or `eps_r` (with optional `mu_r`), not both",
            ),
        };
    }
    if m.index.is_some() || m.eps_r.is_some() || m.mu_r.is_some() {
        return src.err(raw.span(), format!("`{name}` comes from the ITU table; index/eps_r/mu_r apply to custom only"));
    }
    src.wrap(m.name.span(), material_from_table(name, carrier.fc(), convention))
}

/// Reads and parses a configuration file.
pub fn parse_config(path: &Path) -> Result<StudyConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text).map_err(|e| ConfigError {
        line: e.line,
        message: format!("{}: {}", path.display(), e.message),
    })
}
