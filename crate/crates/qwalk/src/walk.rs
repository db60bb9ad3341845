//! Exact amplitude evolution of the unrestricted walk on the integers.

use num_complex::Complex;

use crate::coin::{PqrsBasis, QubitState, UnitaryCoin, WalkType};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Snapshot of the two-component amplitudes at a fixed time.
///
/// Stored densely over [-n, n]; sites with the wrong parity hold exact zeros.
/// One step maps the value at k to P * (k+1) + Q * (k-1), so a P-step moves
/// the walker left and a Q-step right.
#[derive(Clone, Debug)]
pub struct AmplitudeField<F: Scalar> {
    time: usize,
    walk_type: WalkType,
    // index i holds site i - time
    values: Vec<[Complex<F>; 2]>,
}

impl<F: Scalar> AmplitudeField<F> {
    /// Time-0 field: the whole state sits at the origin.
    pub fn initial(state: &QubitState<F>, walk_type: WalkType) -> Self {
        AmplitudeField {
            time: 0,
            walk_type,
            values: vec![state.vector()],
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn walk_type(&self) -> WalkType {
        self.walk_type
    }

    /// Amplitude pair at site k; zero outside [-n, n].
    pub fn amplitude(&self, site: i64) -> [Complex<F>; 2] {
        let n = self.time as i64;
        if site < -n || site > n {
            let z = Complex::new(F::zero(), F::zero());
            return [z, z];
        }
        self.values[(site + n) as usize]
    }

    /// Iterate (site, amplitude pair) in increasing site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, [Complex<F>; 2])> + '_ {
        let n = self.time as i64;
        self.values.iter().enumerate().map(move |(i, v)| (i as i64 - n, *v))
    }

    /// One application of the dynamics for the matching basis.
    pub fn step(&self, basis: &PqrsBasis<F>) -> Result<AmplitudeField<F>> {
        if basis.walk_type() != self.walk_type {
            return Err(Error::TypeMismatch);
        }
        let n = self.time as i64;
        let z = Complex::new(F::zero(), F::zero());
        let mut values = vec![[z, z]; self.values.len() + 2];
        for (j, out) in values.iter_mut().enumerate() {
            let site = j as i64 - n - 1;
            let from_right = basis.p().apply(self.amplitude(site + 1));
            let from_left = basis.q().apply(self.amplitude(site - 1));
            *out = [from_right[0] + from_left[0], from_right[1] + from_left[1]];
        }
        Ok(AmplitudeField {
            time: self.time + 1,
            walk_type: self.walk_type,
            values,
        })
    }

    /// Total probability carried by the field.
    pub fn total_norm(&self) -> F {
        self.values
            .iter()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum()
    }
}

/// n applications of the step to the initial field.
pub fn evolve<F: Scalar>(
    state: &QubitState<F>,
    coin: &UnitaryCoin<F>,
    walk_type: WalkType,
    n: usize,
) -> AmplitudeField<F> {
    let basis = PqrsBasis::new(coin, walk_type);
    let mut field = AmplitudeField::initial(state, walk_type);
    for _ in 0..n {
        field = field.step(&basis).expect("walk types match by construction");
    }
    field
}

/// Site probabilities extracted from an amplitude field.
#[derive(Clone, Debug)]
pub struct Distribution<F: Scalar> {
    time: usize,
    probs: Vec<F>, // index i holds site i - time
}

impl<F: Scalar> Distribution<F> {
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn prob(&self, site: i64) -> F {
        let n = self.time as i64;
        if site < -n || site > n {
            return F::zero();
        }
        self.probs[(site + n) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, F)> + '_ {
        let n = self.time as i64;
        self.probs.iter().enumerate().map(move |(i, p)| (i as i64 - n, *p))
    }

    pub fn total(&self) -> F {
        self.probs.iter().cloned().sum()
    }
}

/// Squared moduli per site; errors if the total drifted beyond EPS_NORM.
pub fn distribution<F: Scalar>(field: &AmplitudeField<F>) -> Result<Distribution<F>> {
    let probs: Vec<F> = field
        .values
        .iter()
        .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
        .collect();
    let total: F = probs.iter().cloned().sum();
    if !((total - F::one()).abs() <= F::EPS_NORM) {
        return Err(Error::NormDrift {
            total: total.to_f64().unwrap_or(f64::NAN),
            tol: F::EPS_NORM.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Distribution {
        time: field.time,
        probs,
    })
}

/// Sum of k^m * P(X = k).
pub fn empirical_moment<F: Scalar>(dist: &Distribution<F>, m: u32) -> F {
    dist.iter()
        .map(|(site, p)| F::lit(site as f64).powi(m as i32) * p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn hadamard_basis(wt: WalkType) -> PqrsBasis<f64> {
        PqrsBasis::new(&UnitaryCoin::hadamard(), wt)
    }

    #[test]
    fn initial_fields() {
        let f = AmplitudeField::initial(&QubitState::<f64>::left(), WalkType::A);
        assert_eq!(f.amplitude(0)[0], Complex::new(1.0, 0.0));
        let f = AmplitudeField::initial(&QubitState::<f64>::symmetric(), WalkType::G);
        assert!((f.total_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_step_hadamard_a_from_right() {
        let f = AmplitudeField::initial(&QubitState::<f64>::right(), WalkType::A);
        let f = f.step(&hadamard_basis(WalkType::A)).unwrap();
        let left = f.amplitude(-1);
        let right = f.amplitude(1);
        assert!((left[0] - Complex::new(H, 0.0)).norm() < 1e-15);
        assert!(left[1].norm() < 1e-15);
        assert!(right[0].norm() < 1e-15);
        assert!((right[1] - Complex::new(-H, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_step_hadamard_g_from_left() {
        let f = AmplitudeField::initial(&QubitState::<f64>::left(), WalkType::G);
        let f = f.step(&hadamard_basis(WalkType::G)).unwrap();
        // P_G phi lands at -1, Q_G phi at +1
        let left = f.amplitude(-1);
        assert!((left[0] - Complex::new(H, 0.0)).norm() < 1e-15);
        assert!((left[1] - Complex::new(H, 0.0)).norm() < 1e-15);
        assert!((f.total_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn type_mismatch_rejected() {
        let f = AmplitudeField::initial(&QubitState::<f64>::left(), WalkType::A);
        assert!(matches!(
            f.step(&hadamard_basis(WalkType::G)),
            Err(Error::TypeMismatch)
        ));
    }

    #[test]
    fn evolve_small_hadamard() {
        let coin = UnitaryCoin::hadamard();
        let d0 = distribution(&evolve(&QubitState::<f64>::right(), &coin, WalkType::A, 0)).unwrap();
        assert!((d0.prob(0) - 1.0).abs() < 1e-15);
        let d1 = distribution(&evolve(&QubitState::<f64>::right(), &coin, WalkType::A, 1)).unwrap();
        assert!((d1.prob(-1) - 0.5).abs() < 1e-15);
        assert!((d1.prob(1) - 0.5).abs() < 1e-15);
        let d2 = distribution(&evolve(&QubitState::<f64>::left(), &coin, WalkType::A, 2)).unwrap();
        assert!((d2.prob(-2) - 0.25).abs() < 1e-14);
        assert!((d2.prob(0) - 0.5).abs() < 1e-14);
        assert!((d2.prob(2) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn parity_sites_are_zero() {
        let coin = UnitaryCoin::hadamard();
        let d = distribution(&evolve(&QubitState::<f64>::left(), &coin, WalkType::A, 5)).unwrap();
        for (site, p) in d.iter() {
            if (site + 5) % 2 != 0 {
                assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn moments_small_cases() {
        let coin = UnitaryCoin::hadamard();
        let d1 = distribution(&evolve(&QubitState::<f64>::right(), &coin, WalkType::A, 1)).unwrap();
        assert!((empirical_moment(&d1, 0) - 1.0).abs() < 1e-14);
        assert!(empirical_moment(&d1, 1).abs() < 1e-14);
        let d2 = distribution(&evolve(&QubitState::<f64>::symmetric(), &coin, WalkType::A, 2)).unwrap();
        assert!((empirical_moment(&d2, 2) - 2.0).abs() < 1e-13);
    }
}
