//! Random coins and states for self-checks and property sweeps.

use num_complex::Complex;
use rand::Rng;

use crate::coin::{QubitState, UnitaryCoin, WalkType};
use crate::scalar::Scalar;

// keeps theta away from 0 and pi/2 so all four coin entries stay nonzero
const THETA_MARGIN: f64 = 0.15;

fn polar<F: Scalar>(r: f64, phase: f64) -> Complex<F> {
    Complex::from_polar(F::lit(r), F::lit(phase))
}

/// A uniform-ish unitary coin with all entries bounded away from zero:
/// U = diag(e^{i xi}, 1) * rotation(theta) * diag(e^{i zeta}, e^{i phi}).
pub fn random_coin<F: Scalar, R: Rng>(rng: &mut R) -> UnitaryCoin<F> {
    let theta = THETA_MARGIN
        + rng.gen::<f64>() * (std::f64::consts::FRAC_PI_2 - 2.0 * THETA_MARGIN);
    let xi = rng.gen::<f64>() * std::f64::consts::TAU;
    let zeta = rng.gen::<f64>() * std::f64::consts::TAU;
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    let (s, c) = theta.sin_cos();
    UnitaryCoin::new(
        polar(c, xi + zeta),
        polar(s, xi + phi),
        polar(-s, zeta),
        polar(c, phi),
    )
    .expect("constructed unitary")
}

/// Like [`random_coin`] but with |b|^2/|a|^2 kept within [1/3, 3]. The
/// alternating moment sums lose precision like eps * (|b|/|a|)^(2 l_min) at
/// large n, so oracle comparisons at tight absolute tolerances need
/// balanced coins; skewed coins are exercised at smaller n instead.
pub fn random_balanced_coin<F: Scalar, R: Rng>(rng: &mut R) -> UnitaryCoin<F> {
    let lo = (1f64 / 3.0).sqrt().atan(); // |b|^2/|a|^2 = 1/3
    let hi = 3f64.sqrt().atan();
    let theta = lo + rng.gen::<f64>() * (hi - lo);
    let xi = rng.gen::<f64>() * std::f64::consts::TAU;
    let zeta = rng.gen::<f64>() * std::f64::consts::TAU;
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    let (s, c) = theta.sin_cos();
    UnitaryCoin::new(
        polar(c, xi + zeta),
        polar(s, xi + phi),
        polar(-s, zeta),
        polar(c, phi),
    )
    .expect("constructed unitary")
}

/// A uniform-ish normalized qubit state.
pub fn random_state<F: Scalar, R: Rng>(rng: &mut R) -> QubitState<F> {
    let t = rng.gen::<f64>();
    let phi1 = rng.gen::<f64>() * std::f64::consts::TAU;
    let phi2 = rng.gen::<f64>() * std::f64::consts::TAU;
    QubitState::new(polar(t.sqrt(), phi1), polar((1.0 - t).sqrt(), phi2))
        .expect("normalized by construction")
}

/// A random state in the symmetric class for the given coin and type:
/// |alpha| = |beta| = 1/sqrt(2) with the relative phase chosen to cancel the
/// interference term exactly.
pub fn random_symmetric_state<F: Scalar, R: Rng>(
    rng: &mut R,
    coin: &UnitaryCoin<F>,
    wt: WalkType,
) -> QubitState<F> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let base = rng.gen::<f64>() * std::f64::consts::TAU;
    let flip = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let arg_w = match wt {
        WalkType::A => (coin.a() * coin.b().conj()).arg().to_f64().unwrap(),
        WalkType::G => (coin.a() * coin.c().conj()).arg().to_f64().unwrap(),
    };
    // A-type needs arg(alpha) - arg(beta) = -(arg w -/+ pi/2);
    // G-type needs arg(beta) - arg(alpha) = -(arg w -/+ pi/2)
    let delta = match wt {
        WalkType::A => arg_w - flip * std::f64::consts::FRAC_PI_2,
        WalkType::G => -arg_w + flip * std::f64::consts::FRAC_PI_2,
    };
    QubitState::new(polar(h, base), polar(h, base + delta))
        .expect("normalized by construction")
}
