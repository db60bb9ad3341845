use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole crate is generic over.
///
/// The tolerances are per-type: entries are O(1) and products involve at most
/// a few thousand factors, so `f64` gets tight absolute tolerances while `f32`
/// gets correspondingly looser ones.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for unitarity, orthonormality and state-normalization checks.
    const EPS_UNIT: Self;
    /// Tolerance for basis expansion / recombination residuals.
    const EPS_EXPAND: Self;
    /// Tolerance for walk norm conservation (drift accumulates over steps).
    const EPS_NORM: Self;
    /// Target accuracy of the quadrature routines.
    const EPS_QUAD: Self;

    /// Convert an `f64` literal, panicking on failure (literals always fit).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal conversion")
    }

    /// Convert a `usize` count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }
}

impl Scalar for f64 {
    const EPS_UNIT: Self = 1e-10;
    const EPS_EXPAND: Self = 1e-12;
    const EPS_NORM: Self = 1e-9;
    const EPS_QUAD: Self = 1e-8;
}

impl Scalar for f32 {
    const EPS_UNIT: Self = 1e-4;
    const EPS_EXPAND: Self = 1e-5;
    const EPS_NORM: Self = 1e-3;
    const EPS_QUAD: Self = 1e-4;
}
