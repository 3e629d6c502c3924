use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use risbench::materials::{fresnel_spectrum, material_from_itu, CarrierConfig, IndexConvention, Material, MaterialKind};
use risbench::propagation::*;

fn carrier() -> CarrierConfig {
    CarrierConfig::default()
}

fn concrete() -> Material {
    material_from_itu(MaterialKind::Concrete, 28e9, IndexConvention::default()).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn green_at_unit_argument() {
    let c = carrier();
    let d = c.wavelength() / (2.0 * PI);
    let g = green2d(Point2D::new(d, 0.0), Point2D::ORIGIN, &c).unwrap();
    assert!((g - Complex64::new(-0.022_064_241_053_919_24, 0.191_299_421_639_491_64)).norm() < 1e-12);
}

#[test]
fn green_decay_ratio() {
    let c = carrier();
    let l = c.wavelength();
    let g = |d: f64| green2d(Point2D::new(d, 0.0), Point2D::ORIGIN, &c).unwrap().norm();
    let ratio = g(100.0 * l) / g(400.0 * l);
    assert!((ratio - 2.0).abs() < 0.02, "{ratio}");
}

#[test]
fn normal_derivative_matches_finite_difference() {
    let c = carrier();
    let l = c.wavelength();
    let u0 = Point2D::new(0.4 * l, 0.0);
    // |u0 - s| = 3 lambda
    let s = Point2D::new(0.4 * l + 3.0 * l * 0.6, 3.0 * l * 0.8);
    let h = 1e-4 * l;
    let fd = (green2d(Point2D::new(u0.x, h), s, &c).unwrap() - green2d(Point2D::new(u0.x, -h), s, &c).unwrap())
        / (2.0 * h);
    let exact = green2d_normal_derivative(u0, s, &c).unwrap();
    assert!(rel(fd, exact) < 1e-5, "{}", rel(fd, exact));
}

#[test]
fn normal_derivative_far_zone() {
    let c = carrier();
    let l = c.wavelength();
    let d = 500.0 * l;
    let s = Point2D::new(0.6 * d, 0.8 * d);
    let exact = green2d_normal_derivative(Point2D::ORIGIN, s, &c).unwrap();
    let j = Complex64::new(0.0, 1.0);
    let far = (-j / (8.0 * PI)).sqrt() * (2.0 * PI / l).sqrt() * (j * c.wavenumber() * d).exp() / d.sqrt() * 0.8;
    assert!(rel(far, exact) < 1e-2, "{}", rel(far, exact));
    // s right above u0
    let above = green2d_normal_derivative(Point2D::ORIGIN, Point2D::new(0.0, d), &c).unwrap();
    let cos_one = (-j / (8.0 * PI)).sqrt() * (2.0 * PI / l).sqrt() * (j * c.wavenumber() * d).exp() / d.sqrt();
    assert!(rel(cos_one, above) < 1e-2);
}

#[test]
fn pec_reflection_equals_image_up_to_evanescent_residual() {
    // Dropping |kx| > k leaves -G(mirror) + (H0 Struve - Y0)(kZ) / 4 when the
    // points are vertically aligned; for large kZ that residual is
    // (1 - 1/(kZ)^2) / (2 pi kZ).
    let c = carrier();
    let l = c.wavelength();
    let pec = Material::pec_surrogate();
    for &zsum in &[10.0 * l, 25.0 * l, 60.0 * l] {
        let s = Point2D::new(0.3, 0.4 * zsum);
        let r = Point2D::new(0.3, 0.6 * zsum);
        let weyl = weyl_reflected_field(r, s, &pec, &c).unwrap();
        let image = -green2d(r, s.mirror_z(), &c).unwrap();
        let x = c.wavenumber() * zsum;
        let residual = (1.0 - 1.0 / (x * x)) / (2.0 * PI * x);
        let got = weyl - image;
        assert!((got - residual).norm() < 1e-3 * residual, "kZ = {x}: {got} vs {residual}");
        // relative deviation from the ideal image shrinks like (kZ)^-1/2
        let bound = 1.05 * residual / image.norm();
        assert!(rel(weyl, image) <= bound);
    }
}

#[test]
fn weyl_matches_dense_grid() {
    let c = carrier();
    let k = c.wavenumber();
    let m = concrete();
    let r = Point2D::new(2.0, 3.0);
    let s = Point2D::new(-1.0, 2.0);
    let dx = r.x - s.x;
    let zsum = r.z + s.z;
    // composite trapezoid in phi = asin(kx / k) with 1e5 panels
    let n = 100_000;
    let h = PI / n as f64;
    let f = |phi: f64| {
        let (sp, cp) = phi.sin_cos();
        fresnel_spectrum((k * sp).clamp(-k, k), &m, &c).unwrap() * Complex64::new(0.0, k * (dx * sp + zsum * cp)).exp()
    };
    let mut sum = 0.5 * (f(-0.5 * PI) + f(0.5 * PI));
    for i in 1..n {
        sum += f(-0.5 * PI + i as f64 * h);
    }
    let grid = Complex64::new(0.0, 1.0) / (4.0 * PI) * sum * h;
    let weyl = weyl_reflected_field(r, s, &m, &c).unwrap();
    assert!(rel(weyl, grid) < 1e-4, "{}", rel(weyl, grid));
}

#[test]
fn weyl_invariances() {
    let c = carrier();
    let m = concrete();
    let r = Point2D::new(0.7, 1.3);
    let s = Point2D::new(-0.4, 0.9);
    let base = weyl_reflected_field(r, s, &m, &c).unwrap();
    let t = Point2D::new(2.345, 0.0);
    let shifted = weyl_reflected_field(r + t, s + t, &m, &c).unwrap();
    assert!(rel(shifted, base) < 1e-8);
    let swapped = weyl_reflected_field(s, r, &m, &c).unwrap();
    assert!(rel(swapped, base) < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn green_is_symmetric_and_translation_invariant(
        rx in -5.0f64..5.0, rz in -5.0f64..5.0, sx in -5.0f64..5.0, sz in -5.0f64..5.0,
        tx in -50.0f64..50.0, tz in -50.0f64..50.0,
    ) {
        let c = carrier();
        let (r, s) = (Point2D::new(rx, rz), Point2D::new(sx, sz));
        prop_assume!(r.distance(s) > 1e-3);
        let g = green2d(r, s, &c).unwrap();
        prop_assert_eq!(g, green2d(s, r, &c).unwrap());
        let t = Point2D::new(tx, tz);
        prop_assert!(rel(green2d(r + t, s + t, &c).unwrap(), g) < 1e-9);
    }

    #[test]
    fn incidence_cosine_in_unit_interval(ux in -3.0f64..3.0, sx in -3.0f64..3.0, sz in -3.0f64..3.0) {
        let u0 = Point2D::new(ux, 0.0);
        let s = Point2D::new(sx, sz);
        prop_assume!(u0.distance(s) > 1e-9);
        let c = incidence_cosine(u0, s).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn material_reflection_never_exceeds_the_pec_image(
        rx in -1.0f64..1.0, rz in 0.05f64..1.0, sx in -1.0f64..1.0, sz in 0.05f64..1.0, idx in 0usize..2,
    ) {
        let c = carrier();
        let (r, s) = (Point2D::new(rx, rz), Point2D::new(sx, sz));
        prop_assume!(r.distance(s.mirror_z()) > 10.0 * c.wavelength());
        let m = if idx == 0 {
            concrete()
        } else {
            material_from_itu(MaterialKind::Plasterboard, 28e9, IndexConvention::default()).unwrap()
        };
        let weyl = weyl_reflected_field(r, s, &m, &c).unwrap();
        let pec = green2d(r, s.mirror_z(), &c).unwrap();
        prop_assert!(weyl.norm() <= 1.01 * pec.norm());
    }
}
