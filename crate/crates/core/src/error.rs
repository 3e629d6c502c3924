use num_complex::Complex64;
use thiserror::Error;

/// Adaptive quadrature ran out of its subdivision budget.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("quadrature did not converge after {panels} panels: estimate {estimate}, error bound {error_bound:e}")]
pub struct QuadratureError {
    pub estimate: Complex64,
    pub error_bound: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("unsupported Bessel order {0}; only orders 0 and 1 are implemented")]
    UnsupportedOrder(u32),

    #[error("complex division by exact zero")]
    DivisionByZero,

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error("empirical distribution needs at least one finite sample")]
    EmptySamples,

    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("{fc_ghz} GHz is outside the {min_ghz}-{max_ghz} GHz validity range of the material model")]
    FrequencyOutOfRange {
        fc_ghz: f64,
        min_ghz: f64,
        max_ghz: f64,
    },

    #[error("material table: {0}")]
    MaterialTable(String),

    #[error("wavenumber {kx} exceeds the propagating limit {k}")]
    Evanescent { kx: f64, k: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("phase profile has {got} entries but the surface has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },

    #[error("normalization constant {kappa} deviates {deviation:.4} from -mu0 (allowed 0.05)")]
    Calibration { kappa: Complex64, deviation: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("admissible placement region is empty")]
    EmptyRegion,
}

pub type Result<T> = std::result::Result<T, Error>;
