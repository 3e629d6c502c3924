//! Bessel functions of the first and second kind (orders 0 and 1) and the
//! Hankel function of the first kind, for positive real arguments.
//!
//! Below [`SERIES_CROSSOVER`] the ascending series are summed in double-double
//! arithmetic; the alternating terms grow to ~1e9 at x = 25, which plain f64
//! summation cannot absorb. Above it, Hankel's asymptotic expansion is summed
//! until its terms stop decreasing.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::dd::Dd;
use crate::error::{Error, Result};

/// Argument at which evaluation switches from the ascending series to the
/// asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 25.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::UnsupportedOrder(order));
    }
    Ok(())
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite, got {x}")));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {x}")));
    }
    Ok(())
}

/// J0, J1, Y0, Y1 from the ascending series.
pub(crate) fn series_all(x: f64) -> [f64; 4] {
    let half = 0.5 * x;
    // t = x^2 / 4, exact in double-double
    let t = Dd::prod(half, half);

    // term_k = (-t)^k / (k! k!)        for J0
    // term1_k = (-t)^k / (k! (k+1)!)   for J1
    let mut term0 = Dd::ONE;
    let mut term1 = Dd::ONE;
    let mut j0 = Dd::ONE;
    let mut j1 = Dd::ONE;
    // harmonic numbers H_k, H_{k+1}
    let mut h_k = Dd::ZERO;
    let mut h_k1 = Dd::ONE;
    let mut y0_sum = Dd::ZERO;
    let mut y1_sum = term1 * (h_k + h_k1);

    let mut k: u64 = 0;
    loop {
        k += 1;
        let kf = k as f64;
        term0 = -(term0 * t).div_f64(kf * kf);
        term1 = -(term1 * t).div_f64(kf * (kf + 1.0));
        h_k = h_k1;
        h_k1 = h_k1 + Dd::recip_int(k + 1);

        j0 = j0 + term0;
        j1 = j1 + term1;
        // Y0 series carries (-1)^{k+1} H_k t^k/(k!)^2 = -term0 * H_k
        y0_sum = y0_sum - term0 * h_k;
        y1_sum = y1_sum + term1 * (h_k + h_k1);

        let small = term0.abs().hi < 1e-34 && term1.abs().hi < 1e-34;
        if (kf > t.hi && small) || k > 400 {
            break;
        }
    }

    let j0 = j0.to_f64();
    let j1 = (j1.mul_f64(half)).to_f64();
    let log_term = (half).ln() + EULER_GAMMA;
    let y0 = 2.0 / PI * (log_term * j0 + y0_sum.to_f64());
    let y1 = 2.0 / PI * log_term * j1 - 2.0 / (PI * x) - half / PI * y1_sum.to_f64();
    [j0, j1, y0, y1]
}

/// H^(1)_order(x) from Hankel's asymptotic expansion, summed to the smallest
/// term.
pub(crate) fn asymptotic_series(order: u32, x: f64) -> Complex64 {
    let mu = 4.0 * (order as f64).powi(2);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60u32 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > last || mag < 1e-18 {
            break;
        }
        last = mag;
        // a_k alternates sign in pairs: P gets k = 0, 2, 4 ..., Q gets 1, 3, 5 ...
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let amp = (2.0 / (PI * x)).sqrt();
    leading_phase(order, x) * Complex64::new(amp * p, amp * q)
}

/// exp(j(x - order*pi/2 - pi/4)) without forming the reduced argument.
fn leading_phase(order: u32, x: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    let base = Complex64::new(c, s);
    // exp(-j pi/4) and exp(-j 3pi/4)
    let shift = match order {
        0 => Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        _ => Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    };
    base * shift
}

fn hankel_unchecked(order: u32, x: f64) -> Complex64 {
    if x <= SERIES_CROSSOVER {
        let [j0, j1, y0, y1] = series_all(x);
        if order == 0 {
            Complex64::new(j0, y0)
        } else {
            Complex64::new(j1, y1)
        }
    } else {
        asymptotic_series(order, x)
    }
}

/// Bessel function of the first kind, J_order(x).
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    check_arg(x)?;
    Ok(hankel_unchecked(order, x).re)
}

/// Bessel function of the second kind, Y_order(x).
pub fn bessel_y(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    check_arg(x)?;
    Ok(hankel_unchecked(order, x).im)
}

/// Hankel function of the first kind, J_order(x) + j Y_order(x).
pub fn hankel1(order: u32, x: f64) -> Result<Complex64> {
    check_order(order)?;
    check_arg(x)?;
    Ok(hankel_unchecked(order, x))
}

/// Both H0 and H1 at the same argument; the series branch produces them
/// together so callers needing the pair pay once.
pub fn hankel1_pair(x: f64) -> Result<(Complex64, Complex64)> {
    check_arg(x)?;
    if x <= SERIES_CROSSOVER {
        let [j0, j1, y0, y1] = series_all(x);
        Ok((Complex64::new(j0, y0), Complex64::new(j1, y1)))
    } else {
        Ok((asymptotic_series(0, x), asymptotic_series(1, x)))
    }
}

/// Leading term of the large-argument expansion,
/// sqrt(2/(pi x)) exp(j(x - order*pi/2 - pi/4)).
pub fn hankel1_asymptotic(order: u32, x: f64) -> Result<Complex64> {
    check_order(order)?;
    check_arg(x)?;
    Ok((2.0 / (PI * x)).sqrt() * leading_phase(order, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_domain() {
        assert!(matches!(bessel_j(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_y(1, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_y(1, f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(hankel1(2, 1.0), Err(Error::UnsupportedOrder(2))));
    }

    #[test]
    fn j0_tends_to_one_at_origin() {
        assert!((bessel_j(0, 1e-12).unwrap() - 1.0).abs() < 1e-15);
        assert!(bessel_j(1, 1e-12).unwrap().abs() < 1e-11);
    }

    #[test]
    fn branches_agree_at_crossover() {
        for &x in &[SERIES_CROSSOVER, SERIES_CROSSOVER - 1e-9, 24.0, 26.0] {
            let s = series_all(x);
            let a0 = asymptotic_series(0, x);
            let a1 = asymptotic_series(1, x);
            assert!((s[0] - a0.re).abs() < 1e-10, "J0 at {x}");
            assert!((s[1] - a1.re).abs() < 1e-10, "J1 at {x}");
            assert!((s[2] - a0.im).abs() < 1e-10, "Y0 at {x}");
            assert!((s[3] - a1.im).abs() < 1e-10, "Y1 at {x}");
        }
    }

    #[test]
    fn asymptotic_leading_term_modulus() {
        for &x in &[0.3, 2.0, 77.0, 5e3] {
            for order in 0..2 {
                let h = hankel1_asymptotic(order, x).unwrap();
                assert!((h.norm() - (2.0 / (PI * x)).sqrt()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pair_matches_single_evaluations() {
        for &x in &[0.5, 12.0, 25.0, 300.0] {
            let (h0, h1) = hankel1_pair(x).unwrap();
            assert_eq!(h0, hankel1(0, x).unwrap());
            assert_eq!(h1, hankel1(1, x).unwrap());
        }
    }
}
