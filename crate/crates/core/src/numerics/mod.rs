//! Special functions, quadrature and empirical statistics shared by the
//! physics modules.

mod bessel;
mod cdf;
mod dd;
mod quad;

pub use bessel::{
    bessel_j, bessel_y, hankel1, hankel1_asymptotic, hankel1_pair, SERIES_CROSSOVER,
};
pub use cdf::{empirical_cdf, CdfTable, Unit};
pub use quad::{adaptive_quad, adaptive_quad_real, QuadOptions};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex division that refuses an exact-zero divisor.
pub fn checked_div(num: Complex64, den: Complex64) -> Result<Complex64> {
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

/// sin(pi x) / (pi x), equal to 1 at the origin.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}
