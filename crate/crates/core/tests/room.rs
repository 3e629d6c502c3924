use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use risbench::materials::{material_from_itu, CarrierConfig, IndexConvention, Material, MaterialKind};
use risbench::propagation::{green2d, Point2D};
use risbench::room::*;

fn concrete() -> Material {
    material_from_itu(MaterialKind::Concrete, 28e9, IndexConvention::default()).unwrap()
}

fn room10() -> RoomGeometry {
    RoomGeometry::new(10.0, 1.0).unwrap()
}

fn interior(rng: &mut ChaCha8Rng, room: &RoomGeometry, margin: f64) -> Point2D {
    let h = 0.5 * room.width() - margin;
    Point2D::new(rng.gen_range(-h..h), rng.gen_range(margin..room.depth() - margin))
}

#[test]
fn pec_images_are_signed_green_functions() {
    let c = CarrierConfig::default();
    let pec = Material::pec_surrogate();
    let s = Point2D::new(1.0, 2.0);
    let r = Point2D::new(-2.5, 6.0);
    for (img, h) in image_contributions(r, s, &room10(), &pec, &c, 4).unwrap() {
        let g = green2d(r, img.position, &c).unwrap();
        let sign = if img.order % 2 == 0 { 1.0 } else { -1.0 };
        assert!((h - sign * g).norm() < 1e-5 * g.norm(), "{img:?}");
        assert!((h.norm() - g.norm()).abs() < 1e-5 * g.norm());
    }
    let w1 = ImageSource {
        position: Point2D::new(1.0, -2.0),
        nx: 0,
        nz: 1,
        order: 1,
    };
    let h = image_contribution(&w1, r, &pec, &c).unwrap();
    assert!((h + green2d(r, s.mirror_z(), &c).unwrap()).norm() < 1e-5 * h.norm());
}

#[test]
fn first_order_images_are_the_four_mirrors() {
    let room = RoomGeometry::new(10.0, 0.6).unwrap();
    let s = Point2D::new(1.0, 2.0);
    let imgs = enumerate_images(&room, s, 1).unwrap();
    let mut got: Vec<(f64, f64)> = imgs.iter().map(|i| (i.position.x, i.position.z)).collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut want = vec![(1.0, -2.0), (1.0, 12.0 - 2.0), (-10.0 - 1.0, 2.0), (10.0 - 1.0, 2.0)];
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (g, w) in got.iter().zip(&want) {
        assert!((g.0 - w.0).abs() < 1e-12 && (g.1 - w.1).abs() < 1e-12);
    }
}

#[test]
fn reciprocity() {
    let c = CarrierConfig::default();
    let m = concrete();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let room = RoomGeometry::new(10.0, 0.7).unwrap();
    for _ in 0..50 {
        let r = interior(&mut rng, &room, 0.05);
        let s = interior(&mut rng, &room, 0.05);
        let a = room_channel(r, s, &room, &m, &c, 5).unwrap();
        let b = room_channel(s, r, &room, &m, &c, 5).unwrap();
        assert!((a.h_coherent - b.h_coherent).norm() < 1e-10 * a.h_coherent.norm().max(1e-300) + 1e-10 * a.gain_power_sum.sqrt());
        assert!((a.gain_power_sum - b.gain_power_sum).abs() < 1e-10 * a.gain_power_sum);
    }
}

#[test]
fn channel_is_the_sum_of_contributions() {
    let c = CarrierConfig::default();
    let m = concrete();
    let (r, s) = (Point2D::new(3.0, 4.0), Point2D::new(-1.0, 8.0));
    let parts = image_contributions(r, s, &room10(), &m, &c, 3).unwrap();
    let sample = room_channel(r, s, &room10(), &m, &c, 3).unwrap();
    let h: Complex64 = parts.iter().map(|(_, h)| h).sum();
    let p: f64 = parts.iter().map(|(_, h)| h.norm_sqr()).sum();
    let l1: f64 = parts.iter().map(|(_, h)| h.norm()).sum();
    assert!((h - sample.h_coherent).norm() < 1e-15 * l1);
    assert!((p - sample.gain_power_sum).abs() < 1e-15 * p);
    assert!(sample.gain_coherent() <= l1 * l1);
    assert_eq!(parts.len(), 24);
}

#[test]
fn higher_orders_fade_on_average() {
    let c = CarrierConfig::default();
    let m = concrete();
    let room = room10();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mean_max = [0.0f64; 7];
    let n = 200;
    for _ in 0..n {
        let r = interior(&mut rng, &room, c.wavelength());
        let s = interior(&mut rng, &room, c.wavelength());
        if r.distance(s) < c.wavelength() {
            continue;
        }
        let parts = image_contributions(r, s, &room, &m, &c, 6).unwrap();
        for order in 1..=6usize {
            let peak = parts
                .iter()
                .filter(|(i, _)| i.order as usize == order)
                .map(|(_, h)| h.norm())
                .fold(0.0, f64::max);
            mean_max[order] += peak / n as f64;
        }
    }
    for order in 2..6 {
        assert!(mean_max[order + 1] <= mean_max[order], "{mean_max:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncation_is_monotone(
        rx in -4.9f64..4.9, rz in 0.1f64..7.9, sx in -4.9f64..4.9, sz in 0.1f64..7.9, m in 1u32..7,
    ) {
        let c = CarrierConfig::default();
        let room = RoomGeometry::new(10.0, 0.8).unwrap();
        let (r, s) = (Point2D::new(rx, rz), Point2D::new(sx, sz));
        prop_assume!(r.distance(s) >= c.wavelength());
        let a = room_channel(r, s, &room, &concrete(), &c, m).unwrap();
        let b = room_channel(r, s, &room, &concrete(), &c, m + 1).unwrap();
        prop_assert!(b.gain_power_sum >= a.gain_power_sum);
        prop_assert!(a.gain_power_sum > 0.0);
    }

    #[test]
    fn image_lattice_counts(sx in -4.9f64..4.9, sz in 0.1f64..4.9, m in 1u32..9, beta in 0.2f64..=1.0) {
        let room = RoomGeometry::new(10.0, beta).unwrap();
        prop_assume!(sz < room.depth());
        let imgs = enumerate_images(&room, Point2D::new(sx, sz), m).unwrap();
        prop_assert_eq!(imgs.len() as u32, 2 * m * (m + 1));
        for order in 1..=m {
            prop_assert_eq!(imgs.iter().filter(|i| i.order == order).count() as u32, 4 * order);
        }
    }
}
