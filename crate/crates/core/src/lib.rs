//! Pseudo-spectral simulation and verification toolkit for the periodic
//! Benjamin–Ono equation
//!
//! ```text
//! ∂ₜu + H∂²ₓu − u∂ₓu = 0,   x ∈ R / 2πλZ,
//! ```
//!
//! organized as
//!
//! * [`grid`] and [`spectral`]: the Fourier calculus on the torus;
//! * [`evolution`]: the integrating-factor solver, Duhamel quadrature,
//!   conservation monitors, symmetries and the equation residual;
//! * [`gauge`]: the gauge transform `W = P₊(e^{−iF/2})` and residuals of the
//!   equations it satisfies;
//! * [`norms`]: windowed surrogates for the Bourgain-type space-time norms;
//! * [`picard`]: the power-series expansion of the flow map and the
//!   third-iterate growth experiment;
//! * [`io`]: binary, JSON and CSV serialization.

pub mod error;
mod fft;
pub mod gauge;
pub mod grid;
pub mod io;
pub mod evolution;
pub mod norms;
pub mod picard;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::Grid;
pub use spectral::{FractionalOp, Lebesgue, Projection, RealField, SpectralField};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
