//! Poisson kernels (exit distributions) of hyperbolic Brownian motion and of
//! Ornstein-Uhlenbeck type diffusions.
//!
//! * [`halfspace`]: kernel of the horocycle half-space `{x_n > 1}`.
//! * [`ball_hyperbolic`]: kernel of a centred ball in the Poincare ball model.
//! * [`ball_ou`]: kernel of a centred ball for `1/2 Delta + lambda x . grad`.
//! * [`specfun`]: the special functions these are built from.
//!
//! Everything here is pure and thread safe.

pub mod ball_hyperbolic;
pub mod ball_ou;
pub mod contour;
pub mod error;
pub mod halfspace;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version, recorded in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
