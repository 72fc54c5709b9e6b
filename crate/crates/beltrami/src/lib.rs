//! Boundary-integral solver for constant-k, force-free Beltrami eigenfields
//! (∇×E = kE, n·E = 0, zero A-cycle circulation) inside axisymmetric domains,
//! using a Debye-source representation of the field.
//!
//! The pipeline: describe the boundary as a surface of revolution
//! ([`geometry`]), discretize the per-Fourier-mode boundary integral
//! operators with a high-order hybrid Gauss-trapezoidal rule
//! ([`quadrature`], [`kernels`], [`debye`]), hunt for wavenumbers where the
//! boundary system becomes singular ([`spectral`]), and evaluate/verify the
//! resulting eigenfield in the volume ([`fieldeval`]).  Closed-form fields on
//! the unit ball ([`sphere`]) provide an analytic validation suite that is
//! independent of the integral-equation machinery.


pub mod debye;
pub mod error;

pub mod geometry;
pub mod kernels;
pub mod quadrature;


pub mod surfcalc;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
