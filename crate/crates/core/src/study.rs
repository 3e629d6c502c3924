//! Monte-Carlo comparison of ambient room propagation and an ideally phased
//! surface over random transmitter/receiver placements.
//!
//! Placement `k` is drawn from its own ChaCha stream keyed by (seed, k), so a
//! sample never depends on batch size or worker count; results are gathered in
//! index order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{CarrierConfig, Material};
use crate::numerics::{CdfTable, Unit};
use crate::propagation::Point2D;
use crate::ris::{normalized_optimal_gain, RisGeometry};
use crate::room::{room_channel, ChannelSample, RoomGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientMode {
    Coherent,
    PowerSum,
    Both,
}

impl AmbientMode {
    /// The individual channel models this mode covers.
    pub fn series(self) -> &'static [AmbientSeries] {
        match self {
            AmbientMode::Coherent => &[AmbientSeries::Coherent],
            AmbientMode::PowerSum => &[AmbientSeries::PowerSum],
            AmbientMode::Both => &[AmbientSeries::Coherent, AmbientSeries::PowerSum],
        }
    }
}

impl FromStr for AmbientMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(AmbientMode::Coherent),
            "power_sum" | "power-sum" => Ok(AmbientMode::PowerSum),
            "both" => Ok(AmbientMode::Both),
            other => Err(Error::Config(format!(
                "unknown ambient mode `{other}` (expected coherent, power_sum or both)"
            ))),
        }
    }
}

/// One ambient channel model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientSeries {
    Coherent,
    PowerSum,
}

impl AmbientSeries {
    pub fn gain(self, sample: &ChannelSample) -> f64 {
        match self {
            AmbientSeries::Coherent => sample.gain_coherent(),
            AmbientSeries::PowerSum => sample.gain_power_sum,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AmbientSeries::Coherent => "coherent",
            AmbientSeries::PowerSum => "power_sum",
        }
    }
}

impl fmt::Display for AmbientSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub room: RoomGeometry,
    pub material: Material,
    pub carrier: CarrierConfig,
    /// Image truncation order M.
    pub max_order: u32,
    pub samples: usize,
    pub seed: u64,
    pub ambient_mode: AmbientMode,
    /// Surface lengths for the gain CDFs, m.
    pub ris_sizes: Vec<f64>,
    /// Element pitch, m.
    pub pitch: f64,
    /// Minimum distance of any placement from every wall, m.
    pub wall_standoff: f64,
    /// Surface center along the z = 0 wall, m.
    pub ris_center_x: f64,
    /// Optional phase resolution in bits; `None` means ideal phases.
    pub phase_bits: Option<u32>,
    /// Worker threads; never affects results.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl StudyConfig {
    /// Defaults: M = 3, pitch lambda/2, standoff lambda, both ambient modes.
    pub fn new(room: RoomGeometry, material: Material, carrier: CarrierConfig, samples: usize) -> Self {
        let lambda = carrier.wavelength();
        StudyConfig {
            room,
            material,
            carrier,
            max_order: 3,
            samples,
            seed: 0,
            ambient_mode: AmbientMode::Both,
            ris_sizes: Vec::new(),
            pitch: 0.5 * lambda,
            wall_standoff: lambda,
            ris_center_x: 0.0,
            phase_bits: None,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.max_order < 1 {
            return Err(Error::Config("truncation order M must be at least 1".into()));
        }
        if !(self.pitch > 0.0 && self.pitch.is_finite()) {
            return Err(Error::Config(format!("pitch must be positive, got {}", self.pitch)));
        }
        if !(self.wall_standoff >= 0.0 && self.wall_standoff.is_finite()) {
            return Err(Error::Config(format!(
                "wall standoff must be nonnegative, got {}",
                self.wall_standoff
            )));
        }
        for &l in &self.ris_sizes {
            if !(l > 0.0 && l <= self.room.width()) {
                return Err(Error::Config(format!(
                    "surface size {l} m must lie in (0, W = {} m]",
                    self.room.width()
                )));
            }
        }
        let half = 0.5 * self.room.width();
        if self.ris_center_x.abs() > half {
            return Err(Error::Config("surface center lies outside the wall".into()));
        }
        if let Some(bits) = self.phase_bits {
            if bits == 0 || bits > 16 {
                return Err(Error::Config(format!("phase_bits must be 1..=16, got {bits}")));
            }
        }
        if let Some(0) = self.workers {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        admissible_region(self).map(|_| ())
    }

    fn run_in_pool<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(job()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
                Ok(pool.install(job))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementPair {
    pub tx: Point2D,
    pub rx: Point2D,
}

/// (x_min, x_max, z_min, z_max) of the admissible placement rectangle.
fn admissible_region(config: &StudyConfig) -> Result<(f64, f64, f64, f64)> {
    let m = config.wall_standoff;
    let half = 0.5 * config.room.width();
    let (x0, x1) = (-half + m, half - m);
    let (z0, z1) = (m, config.room.depth() - m);
    let lambda = config.carrier.wavelength();
    if !(x1 > x0 && z1 > z0) || (x1 - x0).hypot(z1 - z0) <= lambda {
        return Err(Error::EmptyRegion);
    }
    Ok((x0, x1, z0, z1))
}

/// Placement number `index`, reproducible on its own.
pub fn placement(config: &StudyConfig, index: u64) -> Result<PlacementPair> {
    let (x0, x1, z0, z1) = admissible_region(config)?;
    let lambda = config.carrier.wavelength();
    let margin = config.wall_standoff;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let p = Point2D::new(rng.gen_range(x0..x1), rng.gen_range(z0..z1));
        if config.room.contains(p, margin) {
            return p;
        }
    };
    for _ in 0..1_000_000 {
        let tx = draw(&mut rng);
        let rx = draw(&mut rng);
        if tx.distance(rx) >= lambda {
            return Ok(PlacementPair { tx, rx });
        }
    }
    Err(Error::EmptyRegion)
}

/// The first `count` placements of the configured seed.
pub fn sample_placements(config: &StudyConfig, count: usize) -> Result<Vec<PlacementPair>> {
    admissible_region(config)?;
    config.run_in_pool(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|k| placement(config, k))
            .collect::<Result<Vec<_>>>()
    })?
}

fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Ambient channel at every placement, in sample order.
pub fn ambient_samples(config: &StudyConfig) -> Result<Vec<ChannelSample>> {
    config.validate()?;
    config.run_in_pool(|| {
        (0..config.samples as u64)
            .into_par_iter()
            .map(|k| {
                let p = placement(config, k)?;
                room_channel(p.rx, p.tx, &config.room, &config.material, &config.carrier, config.max_order)
            })
            .collect::<Result<Vec<_>>>()
    })?
}

/// Gain CDFs in dB, one per ambient series requested by the config.
pub fn ambient_cdf(config: &StudyConfig) -> Result<Vec<(AmbientSeries, CdfTable)>> {
    let samples = ambient_samples(config)?;
    config
        .ambient_mode
        .series()
        .iter()
        .map(|&series| {
            let db: Vec<f64> = samples.iter().map(|s| to_db(series.gain(s))).collect();
            Ok((series, CdfTable::new(db, Unit::Db)?))
        })
        .collect()
}

/// Normalized optimal surface gain for one placement, honoring the phase
/// resolution knob.
pub fn ris_gain(config: &StudyConfig, pair: &PlacementPair, length: f64) -> Result<f64> {
    let ris = RisGeometry::centered_at(length, config.pitch, config.ris_center_x)?;
    match config.phase_bits {
        None => normalized_optimal_gain(pair.rx, pair.tx, &ris, &config.carrier),
        Some(bits) => {
            let v = crate::ris::ris_channel_vectors(pair.rx, pair.tx, &ris, &config.carrier)?;
            let (_, ideal) = crate::ris::optimal_from_vectors(&v);
            let h = crate::ris::combine(&v, &ideal.quantized(bits)?);
            Ok(h.norm_sqr() * crate::ris::MU0 * crate::ris::MU0)
        }
    }
}

/// Surface gain CDFs in dB for every configured length.
pub fn ris_gain_cdf(config: &StudyConfig) -> Result<Vec<(f64, CdfTable)>> {
    config.validate()?;
    if config.ris_sizes.is_empty() {
        return Err(Error::Config("no surface sizes configured".into()));
    }
    let per_sample: Vec<Vec<f64>> = config.run_in_pool(|| {
        (0..config.samples as u64)
            .into_par_iter()
            .map(|k| {
                let p = placement(config, k)?;
                config
                    .ris_sizes
                    .iter()
                    .map(|&l| ris_gain(config, &p, l).map(to_db))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    config
        .ris_sizes
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let column: Vec<f64> = per_sample.iter().map(|row| row[j]).collect();
            Ok((l, CdfTable::new(column, Unit::Db)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EquivalentSize {
    /// Smallest surface length (m) matching the target.
    Size(f64),
    /// Even a surface spanning the whole wall falls short.
    Saturated,
    /// Zero target: any size suffices.
    Degenerate,
}

impl EquivalentSize {
    /// Length used in distributions: saturated samples are censored at W,
    /// degenerate ones sit at zero.
    pub fn censored(self, width: f64) -> f64 {
        match self {
            EquivalentSize::Size(l) => l,
            EquivalentSize::Saturated => width,
            EquivalentSize::Degenerate => 0.0,
        }
    }
}

/// Smallest surface length whose normalized optimal gain reaches
/// `target_gain`, to within lambda/10.
pub fn equivalent_ris_size(
    tx: Point2D,
    rx: Point2D,
    target_gain: f64,
    config: &StudyConfig,
) -> Result<EquivalentSize> {
    if !(target_gain >= 0.0) || !target_gain.is_finite() {
        return Err(Error::Domain(format!("target gain must be finite and nonnegative, got {target_gain}")));
    }
    if target_gain == 0.0 {
        return Ok(EquivalentSize::Degenerate);
    }
    let width = config.room.width();
    let lambda = config.carrier.wavelength();
    let pair = PlacementPair { tx, rx };
    let gain = |l: f64| ris_gain(config, &pair, l);

    // grow geometrically until the target is met
    let mut lo = 0.0;
    let mut hi = lambda.min(width);
    loop {
        if gain(hi)? >= target_gain {
            break;
        }
        if hi >= width {
            return Ok(EquivalentSize::Saturated);
        }
        lo = hi;
        hi = (2.0 * hi).min(width);
    }
    let tol = 0.1 * lambda;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gain(mid)? >= target_gain {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(EquivalentSize::Size(hi))
}

/// Equivalent sizes for one ambient series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalentSizeSeries {
    pub series: AmbientSeries,
    pub sizes: Vec<EquivalentSize>,
    pub cdf: CdfTable,
    pub saturated: usize,
    pub degenerate: usize,
}

/// Paired comparison: for each placement the ambient gain becomes the target
/// of the surface at the very same placement.
pub fn equivalent_size_cdf(config: &StudyConfig) -> Result<Vec<EquivalentSizeSeries>> {
    config.validate()?;
    let series = config.ambient_mode.series();
    let rows: Vec<Vec<EquivalentSize>> = config.run_in_pool(|| {
        (0..config.samples as u64)
            .into_par_iter()
            .map(|k| {
                let p = placement(config, k)?;
                let amb = room_channel(
                    p.rx,
                    p.tx,
                    &config.room,
                    &config.material,
                    &config.carrier,
                    config.max_order,
                )?;
                series
                    .iter()
                    .map(|s| equivalent_ris_size(p.tx, p.rx, s.gain(&amb), config))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let width = config.room.width();
    series
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let sizes: Vec<EquivalentSize> = rows.iter().map(|r| r[j]).collect();
            let saturated = sizes.iter().filter(|e| matches!(e, EquivalentSize::Saturated)).count();
            let degenerate = sizes.iter().filter(|e| matches!(e, EquivalentSize::Degenerate)).count();
            let values = sizes.iter().map(|e| e.censored(width)).collect();
            Ok(EquivalentSizeSeries {
                series: s,
                sizes,
                cdf: CdfTable::new(values, Unit::Meters)?,
                saturated,
                degenerate,
            })
        })
        .collect()
}
