//! One-dimensional two-state quantum random walks: exact amplitude
//! evolution, path-sum combinatorics in the PQRS matrix basis, closed-form
//! moments, the weak-limit density, and absorption at the origin.
//!
//! Everything is generic over the floating-point scalar through [`Scalar`]
//! (implemented for `f32` and `f64`); the aliases at the crate root pin the
//! common `f64` instantiations.

pub mod absorption;
pub mod coin;
pub mod error;
pub mod limit;
pub mod mat2;
pub mod pathsum;
pub mod sample;
pub mod scalar;
pub mod verify;
pub mod walk;

pub use crate::error::{Error, Result};
pub use crate::scalar::Scalar;

/// Complex double.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision coin matrix.
pub type Coin64 = coin::UnitaryCoin<f64>;
/// Double-precision qubit state.
pub type State64 = coin::QubitState<f64>;
/// Double-precision matrix basis.
pub type Basis64 = coin::PqrsBasis<f64>;
/// Double-precision 2x2 matrix.
pub type Mat64 = mat2::Mat2<f64>;
/// Double-precision limit density.
pub type LimitDensity64 = limit::LimitDensity<f64>;
/// Double-precision absorption problem.
pub type AbsorptionSpec64 = absorption::AbsorptionSpec<f64>;
