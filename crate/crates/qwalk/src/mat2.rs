//! Minimal 2x2 complex matrix arithmetic.

use num_complex::Complex;

use crate::scalar::Scalar;

/// A 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<F> {
    pub e: [[Complex<F>; 2]; 2],
}

impl<F: Scalar> Mat2<F> {
    pub fn new(
        e00: Complex<F>,
        e01: Complex<F>,
        e10: Complex<F>,
        e11: Complex<F>,
    ) -> Self {
        Mat2 {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        let z = Complex::new(F::zero(), F::zero());
        Mat2::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = Complex::new(F::zero(), F::zero());
        let o = Complex::new(F::one(), F::zero());
        Mat2::new(o, z, z, o)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = out.e[i][j] + rhs.e[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: Complex<F>) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = out.e[i][j] * c;
            }
        }
        out
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: [Complex<F>; 2]) -> [Complex<F>; 2] {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    /// Trace inner product tr(self^* rhs).
    pub fn trace_inner(&self, rhs: &Self) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        for i in 0..2 {
            for j in 0..2 {
                acc = acc + self.e[i][j].conj() * rhs.e[i][j];
            }
        }
        acc
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &Self) -> F {
        let mut worst = F::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.e[i][j] - rhs.e[i][j]).norm());
            }
        }
        worst
    }
}

/// Integer power of a complex number by repeated squaring; negative exponents
/// invert first.
pub fn cpow<F: Scalar>(z: Complex<F>, k: i32) -> Complex<F> {
    let mut base = if k < 0 { z.inv() } else { z };
    let mut exp = k.unsigned_abs();
    let mut acc = Complex::new(F::one(), F::zero());
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn mul_identity() {
        let m = Mat2::new(
            C::new(1.0, 2.0),
            C::new(-0.5, 0.25),
            C::new(0.0, 1.0),
            C::new(3.0, -1.0),
        );
        assert_eq!(m.mul(&Mat2::identity()), m);
        assert_eq!(Mat2::identity().mul(&m), m);
    }

    #[test]
    fn cpow_negative() {
        let z = C::new(0.3, 0.4);
        let w = cpow(z, -3);
        assert!((w * z * z * z - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trace_inner_is_frobenius() {
        let m = Mat2::new(
            C::new(1.0, 2.0),
            C::new(-0.5, 0.25),
            C::new(0.0, 1.0),
            C::new(3.0, -1.0),
        );
        let n2 = m.trace_inner(&m);
        assert!(n2.im.abs() < 1e-14);
        let expect: f64 = m
            .e
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum();
        assert!((n2.re - expect).abs() < 1e-12);
    }
}
