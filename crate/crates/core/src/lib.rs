//! Quadratic Gauss sums, square-root counting sums, the circle-method
//! decomposition of the Weyl multiplier along the squares, discrete averaging
//! operators on the integers, and sparse stopping-time machinery.

pub mod arith;
pub mod circle;
pub mod codec;
pub mod experiments;
pub mod error;
pub mod fft;
pub mod gauss;
pub mod hsum;
pub mod ops;
pub mod report;
pub mod sparse;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
