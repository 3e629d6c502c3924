//! Exact two-dimensional physics for comparing the power a reflecting
//! intelligent surface delivers against the power already carried by wall
//! reflections in an empty room, with the direct path blocked.
//!
//! * [`numerics`]: Bessel/Hankel functions, adaptive quadrature, empirical CDFs.
//! * [`materials`]: ITU power-law wall materials and the plane-wave reflection
//!   response.
//! * [`propagation`]: 2D Green's function and the spectral single-reflection
//!   evaluation.
//! * [`room`]: image-lattice ambient channel, coherent and power-sum.
//! * [`ris`]: surface channel vectors, cophasing, near/far-field responses and
//!   normalization.
//! * [`study`]: Monte-Carlo placements and the equivalent-surface-size
//!   distribution.
//! * [`cli`]: configuration files, CSV output and the `risbench` command.

pub mod cli;
pub mod error;
pub mod materials;
pub mod numerics;
pub mod propagation;
pub mod ris;
pub mod room;
pub mod study;

pub use error::{Error, QuadratureError, Result};
pub use num_complex::Complex64;
