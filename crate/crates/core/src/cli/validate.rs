//! Self-checks run by `risbench validate`.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::materials::{
    fresnel_spectrum, material_from_itu, CarrierConfig, IndexConvention, Material, MaterialKind,
};
use crate::numerics::{bessel_j, bessel_y, hankel1};
use crate::propagation::{weyl_reflected_field, Point2D};
use crate::ris::{fit_ris_normalization, normalization_deviation, CalibrationGeometry};
use crate::room::{image_contribution, ImageSource};
use crate::study::StudyConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Specular reference geometries (wavelengths) for the normalization fit.
pub const CALIBRATION_GEOMETRIES: [CalibrationGeometry; 3] = [
    CalibrationGeometry::REFERENCE,
    CalibrationGeometry {
        length: 100.0,
        tx: Point2D::new(-15.0, 25.0),
        rx: Point2D::new(15.0, 25.0),
    },
    CalibrationGeometry {
        length: 80.0,
        tx: Point2D::new(-5.0, 15.0),
        rx: Point2D::new(12.0, 36.0),
    },
];

fn calibration_checks(carrier: &CarrierConfig, out: &mut Vec<CheckResult>) -> Result<()> {
    let mut kappas = Vec::new();
    for (i, g) in CALIBRATION_GEOMETRIES.iter().enumerate() {
        let kappa = fit_ris_normalization(carrier, g)?;
        let dev = normalization_deviation(kappa);
        out.push(check(
            &format!("calibration geometry {}", i + 1),
            dev <= 0.05,
            format!("kappa = {kappa:.6e}, |kappa/(-mu0) - 1| = {dev:.3e} (limit 5e-2)"),
        ));
        kappas.push(kappa);
    }
    let spread = kappas
        .iter()
        .flat_map(|a| kappas.iter().map(move |b| ((a - b) / b).norm()))
        .fold(0.0, f64::max);
    out.push(check(
        "calibration geometry independence",
        spread <= 0.02,
        format!("max relative spread {spread:.3e} (limit 2e-2)"),
    ));
    Ok(())
}

fn special_function_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let h0 = hankel1(0, 1.0)?;
    let h1 = hankel1(1, 1.0)?;
    let err = (h0.re - 0.765_197_686_557_966_6)
        .abs()
        .max((h0.im - 0.088_256_964_215_676_96).abs())
        .max((h1.re - 0.440_050_585_744_933_5).abs())
        .max((h1.im + 0.781_212_821_300_288_7).abs());
    out.push(check(
        "Hankel values at x = 1",
        err < 1e-6,
        format!("max abs deviation {err:.3e} (limit 1e-6)"),
    ));

    let mut worst: f64 = 0.0;
    for i in 0..=400 {
        let x = 0.1 * 10f64.powf(i as f64 / 100.0);
        let w = bessel_j(1, x)? * bessel_y(0, x)? - bessel_j(0, x)? * bessel_y(1, x)?;
        worst = worst.max((w - 2.0 / (PI * x)).abs());
    }
    out.push(check(
        "Wronskian on [0.1, 1e3]",
        worst < 1e-10,
        format!("max abs deviation {worst:.3e} (limit 1e-10)"),
    ));
    Ok(())
}

fn reflection_checks(carrier: &CarrierConfig, material: &Material, out: &mut Vec<CheckResult>) -> Result<()> {
    let k = carrier.wavenumber();
    let grid: Vec<f64> = (0..101).map(|i| -k + 2.0 * k * i as f64 / 100.0).collect();
    let pec = Material::pec_surrogate();
    let mut worst: f64 = 0.0;
    for &kx in &grid {
        worst = worst.max((fresnel_spectrum(kx, &pec, carrier)? + 1.0).norm());
    }
    out.push(check(
        "PEC limit R = -1",
        worst < 1e-5,
        format!("max |R + 1| {worst:.3e} (limit 1e-5)"),
    ));
    let mut peak: f64 = 0.0;
    for &kx in &grid {
        peak = peak.max(fresnel_spectrum(kx, material, carrier)?.norm());
    }
    out.push(check(
        &format!("passivity of {}", material.name),
        peak <= 1.0,
        format!("max |R| {peak:.6}"),
    ));
    Ok(())
}

fn oracle_checks(carrier: &CarrierConfig, material: &Material, out: &mut Vec<CheckResult>) -> Result<()> {
    let lambda = carrier.wavelength();
    let mut rng = ChaCha8Rng::seed_from_u64(2040);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 8 {
        let s = Point2D::new(rng.gen_range(-4.0..4.0), rng.gen_range(0.5..9.5));
        let r = Point2D::new(rng.gen_range(-4.0..4.0), rng.gen_range(0.5..9.5));
        if r.distance(s.mirror_z()) <= 10.0 * lambda {
            continue;
        }
        let img = ImageSource {
            position: s.mirror_z(),
            nx: 0,
            nz: 1,
            order: 1,
        };
        let specular = image_contribution(&img, r, material, carrier)?;
        let weyl = weyl_reflected_field(r, s, material, carrier)?;
        worst = worst.max((specular.norm() - weyl.norm()).abs() / weyl.norm());
        done += 1;
    }
    out.push(check(
        &format!("image vs spectral reflection ({})", material.name),
        worst < 0.03,
        format!("max relative magnitude error {worst:.3e} over {done} geometries (limit 3e-2)"),
    ));
    Ok(())
}

/// Runs every check with the carrier and material of `config`, or the
/// defaults (28 GHz, concrete) without one.
pub fn validation_suite(config: Option<&StudyConfig>) -> Result<Vec<CheckResult>> {
    let (carrier, material) = match config {
        Some(c) => (c.carrier, c.material.clone()),
        None => {
            let carrier = CarrierConfig::default();
            let m = material_from_itu(MaterialKind::Concrete, carrier.fc(), IndexConvention::default())?;
            (carrier, m)
        }
    };
    let mut out = Vec::new();
    special_function_checks(&mut out)?;
    reflection_checks(&carrier, &material, &mut out)?;
    oracle_checks(&carrier, &material, &mut out)?;
    calibration_checks(&carrier, &mut out)?;
    Ok(out)
}
