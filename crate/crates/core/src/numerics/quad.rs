//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
//! integrands on a finite interval.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance. Kronrod nodes never touch the
//! endpoints, so integrable endpoint singularities converge by repeated
//! bisection. For oscillatory integrands the caller may pass the fastest phase
//! rate (rad per unit of the integration variable); the initial partition then
//! caps every panel at a quarter period.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, QuadratureError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target for the whole interval.
    pub tol: f64,
    /// Subdivision budget (total number of panels).
    pub max_panels: usize,
    /// Fastest phase rate of the integrand, if known.
    pub phase_rate: Option<f64>,
}

impl QuadOptions {
    pub fn new(tol: f64) -> Self {
        QuadOptions {
            tol,
            max_panels: 20_000,
            phase_rate: None,
        }
    }

    pub fn with_phase_rate(mut self, rate: f64) -> Self {
        self.phase_rate = Some(rate);
        self
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error, ties broken by position for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let err = ((kron - gauss) * half).norm();
    Ok(Panel { a, b, value, err })
}

/// Integrates `f` over `[a, b]` to the absolute tolerance in `opts`.
pub fn adaptive_quad<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain(format!("quadrature needs a < b, got [{a}, {b}]")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }

    let mut initial = 1usize;
    if let Some(rate) = opts.phase_rate {
        if rate > 0.0 && rate.is_finite() {
            let quarter_period = 0.5 * PI / rate;
            initial = ((b - a) / quarter_period).ceil().max(1.0) as usize;
        }
    }
    if initial > opts.max_panels {
        return Err(Error::Domain(format!(
            "phase rate demands {initial} panels, budget is {}",
            opts.max_panels
        )));
    }

    let width = (b - a) / initial as f64;
    let mut heap = BinaryHeap::with_capacity(initial * 2);
    // panels too narrow to split further
    let mut frozen_value = Complex64::new(0.0, 0.0);
    let mut frozen_err = 0.0;
    for i in 0..initial {
        let lo = a + width * i as f64;
        let hi = if i + 1 == initial { b } else { a + width * (i + 1) as f64 };
        heap.push(kronrod15(&mut f, lo, hi)?);
    }
    let mut panels = initial;
    let mut running_err: f64 = heap.iter().map(|p| p.err).sum();

    loop {
        if frozen_err + running_err <= opts.tol {
            // the running sum drifts under cancellation; confirm exactly
            running_err = heap.iter().map(|p| p.err).sum();
            if frozen_err + running_err <= opts.tol {
                break;
            }
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        running_err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-15 * (b - a) {
            frozen_value += worst.value;
            frozen_err += worst.err;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if panels >= opts.max_panels {
            heap.push(worst);
            break;
        }
        let left = kronrod15(&mut f, worst.a, mid)?;
        let right = kronrod15(&mut f, mid, worst.b)?;
        running_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }

    // sum in position order so the result does not depend on heap layout
    let mut finished: Vec<Panel> = heap.into_vec();
    finished.sort_by(|p, q| p.a.total_cmp(&q.a));
    let estimate = finished.iter().fold(frozen_value, |acc, p| acc + p.value);
    let error_bound = frozen_err + finished.iter().map(|p| p.err).sum::<f64>();
    if error_bound > opts.tol {
        return Err(QuadratureError {
            estimate,
            error_bound,
            panels,
        }
        .into());
    }
    Ok(estimate)
}

/// Real-valued convenience wrapper.
pub fn adaptive_quad_real<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive_quad(|x| Complex64::new(f(x), 0.0), a, b, opts).map(|z| z.re)
}
